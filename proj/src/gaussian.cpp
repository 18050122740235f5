#include "tripol/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "tripol/error.hpp"

namespace tripol {

namespace {

void symmetrize(Eigen::MatrixXd& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace

void SqueezerSpec::validate() const {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InvalidArgument("squeezing parameter r must be finite and >= 0, got " + std::to_string(r));
  }
  if (!(r_prime >= 0.0) || !std::isfinite(r_prime)) {
    throw InvalidArgument("excess noise r_prime must be finite and >= 0, got " +
                          std::to_string(r_prime));
  }
}

SymplecticTransform::SymplecticTransform(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0 || matrix_.rows() % 2 != 0) {
    throw InvalidArgument("transform must be a non-empty square matrix of even size");
  }
}

SymplecticTransform SymplecticTransform::identity(std::size_t n_modes) {
  if (n_modes == 0) throw InvalidArgument("transform needs at least one mode");
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return SymplecticTransform(Eigen::MatrixXd::Identity(dim, dim));
}

SymplecticTransform SymplecticTransform::then(const SymplecticTransform& next) const {
  if (next.matrix_.rows() != matrix_.rows()) {
    throw InvalidArgument("cannot compose transforms of different dimension");
  }
  return SymplecticTransform(next.matrix_ * matrix_);
}

double SymplecticTransform::symplectic_error() const {
  const Eigen::MatrixXd j = symplectic_form(n_modes());
  return (matrix_ * j * matrix_.transpose() - j).cwiseAbs().maxCoeff();
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) {
    throw InvalidArgument("mean vector must have even, non-zero length");
  }
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw InvalidArgument("covariance must be " + std::to_string(mean_.size()) + "x" +
                          std::to_string(mean_.size()));
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw NumericalError("state contains non-finite entries");
  }
  symmetrize(cov_);
  const StateDiagnostics d = diagnose(cov_);
  if (d.min_eigenvalue < kEigenvalueFloor) {
    throw NumericalError("covariance is not positive semidefinite (min eigenvalue " +
                         std::to_string(d.min_eigenvalue) + ")");
  }
  if (d.min_uncertainty_product < 1.0 / 16.0 - kUncertaintyTolerance) {
    throw NumericalError("covariance violates the uncertainty relation (product " +
                         std::to_string(d.min_uncertainty_product) + " < 1/16)");
  }
}

void GaussianState::check_mode(ModeId mode) const {
  if (mode.index >= n_modes()) {
    throw InvalidArgument("mode " + std::to_string(mode.index) + " out of range for " +
                          std::to_string(n_modes()) + "-mode state");
  }
}

Eigen::Matrix2d GaussianState::block(ModeId mode) const {
  check_mode(mode);
  return cov_.block<2, 2>(static_cast<Eigen::Index>(mode.plus()),
                          static_cast<Eigen::Index>(mode.plus()));
}

bool GaussianState::correlated(ModeId mode) const {
  check_mode(mode);
  const auto p = static_cast<Eigen::Index>(mode.plus());
  for (Eigen::Index row = p; row < p + 2; ++row) {
    for (Eigen::Index col = 0; col < cov_.cols(); ++col) {
      if ((col == p || col == p + 1)) continue;
      if (cov_(row, col) != 0.0) return true;
    }
  }
  return false;
}

StateDiagnostics diagnose(const Eigen::MatrixXd& cov) {
  StateDiagnostics d;
  d.asymmetry = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  d.min_uncertainty_product = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k + 1 < cov.rows(); k += 2) {
    d.min_uncertainty_product = std::min(d.min_uncertainty_product, cov(k, k) * cov(k + 1, k + 1));
  }
  return d;
}

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    j(k, k + 1) = 1.0;
    j(k + 1, k) = -1.0;
  }
  return j;
}

GaussianState vacuum_state(std::size_t n_modes) {
  if (n_modes == 0) throw InvalidArgument("vacuum state needs at least one mode");
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return GaussianState(Eigen::VectorXd::Zero(dim),
                       kVacuumVariance * Eigen::MatrixXd::Identity(dim, dim));
}

GaussianState append_vacuum_modes(const GaussianState& state, std::size_t count) {
  const Eigen::Index old_dim = state.mean().size();
  const Eigen::Index dim = old_dim + static_cast<Eigen::Index>(2 * count);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  mean.head(old_dim) = state.mean();
  Eigen::MatrixXd cov = kVacuumVariance * Eigen::MatrixXd::Identity(dim, dim);
  cov.topLeftCorner(old_dim, old_dim) = state.cov();
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState set_dopa_output(const GaussianState& state, ModeId mode, const SqueezerSpec& spec) {
  spec.validate();
  if (state.correlated(mode)) {
    throw PreconditionViolation("mode " + std::to_string(mode.index) +
                                " is correlated with other modes; a squeezer can only seed a "
                                "fresh mode");
  }
  const double squeezed = kVacuumVariance * std::exp(-2.0 * spec.r);
  const double anti = kVacuumVariance * std::exp(2.0 * (spec.r + spec.r_prime));
  Eigen::MatrixXd cov = state.cov();
  const auto p = static_cast<Eigen::Index>(mode.plus());
  const bool amplitude = spec.axis == SqueezeAxis::amplitude;
  cov(p, p) = amplitude ? squeezed : anti;
  cov(p + 1, p + 1) = amplitude ? anti : squeezed;
  cov(p, p + 1) = 0.0;
  cov(p + 1, p) = 0.0;
  return GaussianState(state.mean(), std::move(cov));
}

GaussianState loss_channel(const GaussianState& state, ModeId mode, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidArgument("transmission eta must lie in [0, 1], got " + std::to_string(eta));
  }
  state.check_mode(mode);
  const double s = std::sqrt(eta);
  const auto p = static_cast<Eigen::Index>(mode.plus());

  Eigen::VectorXd mean = state.mean();
  mean.segment<2>(p) *= s;

  Eigen::MatrixXd cov = state.cov();
  cov.middleRows<2>(p) *= s;
  cov.middleCols<2>(p) *= s;
  // The two scalings hit the diagonal block twice, leaving eta * block.
  cov.block<2, 2>(p, p) += (1.0 - eta) * kVacuumVariance * Eigen::Matrix2d::Identity();
  symmetrize(cov);
  return GaussianState(std::move(mean), std::move(cov));
}

SymplecticTransform beamsplitter_transform(std::size_t n_modes, ModeId m1, ModeId m2,
                                           double reflectivity, double phase) {
  if (m1 == m2) throw InvalidArgument("beam splitter needs two distinct modes");
  if (m1.index >= n_modes || m2.index >= n_modes) {
    throw InvalidArgument("beam splitter mode out of range");
  }
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
    throw InvalidArgument("reflectivity must lie in [0, 1], got " + std::to_string(reflectivity));
  }
  if (!std::isfinite(phase)) throw InvalidArgument("beam splitter phase must be finite");

  const double t = std::sqrt(1.0 - reflectivity);
  const double r = std::sqrt(reflectivity);
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  // e^{i phase} on in2 as a quadrature rotation.
  Eigen::Matrix2d rot;
  rot << c, -s, s, c;

  Eigen::MatrixXd m = SymplecticTransform::identity(n_modes).matrix();
  const auto a = static_cast<Eigen::Index>(m1.plus());
  const auto b = static_cast<Eigen::Index>(m2.plus());
  m.block<2, 2>(a, a) = t * Eigen::Matrix2d::Identity();
  m.block<2, 2>(a, b) = r * rot;
  m.block<2, 2>(b, a) = r * Eigen::Matrix2d::Identity();
  m.block<2, 2>(b, b) = -t * rot;
  return SymplecticTransform(std::move(m));
}

SymplecticTransform phase_shift_transform(std::size_t n_modes, ModeId mode, double radians) {
  if (mode.index >= n_modes) throw InvalidArgument("phase shift mode out of range");
  if (!std::isfinite(radians)) throw InvalidArgument("phase must be finite");
  Eigen::MatrixXd m = SymplecticTransform::identity(n_modes).matrix();
  const auto p = static_cast<Eigen::Index>(mode.plus());
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  m.block<2, 2>(p, p) << c, -s, s, c;
  return SymplecticTransform(std::move(m));
}

GaussianState apply_transform(const GaussianState& state, const SymplecticTransform& transform) {
  if (transform.n_modes() != state.n_modes()) {
    throw InvalidArgument("transform acts on " + std::to_string(transform.n_modes()) +
                          " modes but the state has " + std::to_string(state.n_modes()));
  }
  const Eigen::MatrixXd& s = transform.matrix();
  Eigen::MatrixXd cov = s * state.cov() * s.transpose();
  symmetrize(cov);
  return GaussianState(s * state.mean(), std::move(cov));
}

double linear_form_variance(const GaussianState& state, const Eigen::Ref<const Eigen::VectorXd>& c) {
  // Eigenvalues down to kEigenvalueFloor count as zero.
  return std::max(0.0, linear_form_covariance(state, c, c));
}

double linear_form_covariance(const GaussianState& state, const Eigen::Ref<const Eigen::VectorXd>& c,
                              const Eigen::Ref<const Eigen::VectorXd>& d) {
  if (c.size() != state.mean().size() || d.size() != state.mean().size()) {
    throw InvalidArgument("linear form length " + std::to_string(c.size()) +
                          " does not match state dimension " + std::to_string(state.mean().size()));
  }
  return c.dot(state.cov() * d);
}

}  // namespace tripol
