#pragma once

#include <compare>
#include <cstddef>

#include <Eigen/Dense>

namespace tripol {

// Quadratures are X+ = (a + a^dag)/2 and X- = (a - a^dag)/(2i), so the vacuum
// variance of either one is exactly 1/4. Vectors are interleaved per mode:
// (X+_0, X-_0, X+_1, X-_1, ...).
inline constexpr double kVacuumVariance = 0.25;

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr double kUncertaintyTolerance = 1e-12;

struct ModeId {
  std::size_t index = 0;

  constexpr ModeId() = default;
  constexpr explicit ModeId(std::size_t i) : index(i) {}

  constexpr std::size_t plus() const { return 2 * index; }
  constexpr std::size_t minus() const { return 2 * index + 1; }

  friend constexpr auto operator<=>(ModeId, ModeId) = default;
};

enum class SqueezeAxis { amplitude, phase };

/// Output noise of a degenerate parametric amplifier: the squeezed quadrature
/// is scaled by e^{-r}, the anti-squeezed one by e^{r + r_prime}.
struct SqueezerSpec {
  double r = 0.0;
  double r_prime = 0.0;
  SqueezeAxis axis = SqueezeAxis::amplitude;

  void validate() const;
  friend bool operator==(const SqueezerSpec&, const SqueezerSpec&) = default;
};

class SymplecticTransform {
 public:
  /// Takes any square even-sized matrix; the symplectic condition is checked
  /// by symplectic_error(), not enforced here.
  explicit SymplecticTransform(Eigen::MatrixXd matrix);

  static SymplecticTransform identity(std::size_t n_modes);

  std::size_t n_modes() const { return static_cast<std::size_t>(matrix_.rows()) / 2; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// Composite that applies *this first, then `next`.
  SymplecticTransform then(const SymplecticTransform& next) const;

  /// max |S J S^T - J|.
  double symplectic_error() const;

 private:
  Eigen::MatrixXd matrix_;
};

class GaussianState {
 public:
  /// Symmetrizes `cov` and validates shape, positive semidefiniteness and the
  /// per-mode uncertainty relation.
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  std::size_t n_modes() const { return static_cast<std::size_t>(mean_.size()) / 2; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  Eigen::Matrix2d block(ModeId mode) const;

  /// True if any covariance entry couples `mode` to another mode.
  bool correlated(ModeId mode) const;

  void check_mode(ModeId mode) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

struct StateDiagnostics {
  double asymmetry = 0.0;
  double min_eigenvalue = 0.0;
  double min_uncertainty_product = 0.0;

  bool ok() const {
    return asymmetry <= kSymmetryTolerance && min_eigenvalue >= kEigenvalueFloor &&
           min_uncertainty_product >= 1.0 / 16.0 - kUncertaintyTolerance;
  }
};

StateDiagnostics diagnose(const Eigen::MatrixXd& cov);
inline StateDiagnostics diagnose(const GaussianState& state) { return diagnose(state.cov()); }

/// Block-diagonal J with 2x2 blocks [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

GaussianState vacuum_state(std::size_t n_modes);

/// Extends the state with `count` uncorrelated vacuum modes at the end.
GaussianState append_vacuum_modes(const GaussianState& state, std::size_t count);

/// Replaces an uncorrelated mode's block with the squeezer output noise.
GaussianState set_dopa_output(const GaussianState& state, ModeId mode, const SqueezerSpec& spec);

/// Attenuation to transmission eta; the lost fraction is replaced by vacuum.
GaussianState loss_channel(const GaussianState& state, ModeId mode, double eta);

/// out1 = sqrt(T) in1 + sqrt(R) e^{i phase} in2,
/// out2 = sqrt(R) in1 - sqrt(T) e^{i phase} in2, with T = 1 - R.
SymplecticTransform beamsplitter_transform(std::size_t n_modes, ModeId m1, ModeId m2,
                                           double reflectivity, double phase);

/// a -> a e^{i radians} on one mode.
SymplecticTransform phase_shift_transform(std::size_t n_modes, ModeId mode, double radians);

GaussianState apply_transform(const GaussianState& state, const SymplecticTransform& transform);

/// c^T cov c.
double linear_form_variance(const GaussianState& state, const Eigen::Ref<const Eigen::VectorXd>& c);

/// c^T cov d.
double linear_form_covariance(const GaussianState& state, const Eigen::Ref<const Eigen::VectorXd>& c,
                              const Eigen::Ref<const Eigen::VectorXd>& d);

}  // namespace tripol
