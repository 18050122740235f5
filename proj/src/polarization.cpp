#include "tripol/polarization.hpp"

#include <cmath>
#include <string>

#include "tripol/error.hpp"

namespace tripol {

namespace {

constexpr double kPowerMatchTolerance = 1e-9;

}  // namespace

void BrightBeam::validate() const {
  if (!(alpha_c > 0.0) || !std::isfinite(alpha_c)) {
    throw InvalidArgument("beam '" + name + "': alpha_c must be finite and > 0");
  }
  if (!(alpha_a >= 0.0) || !std::isfinite(alpha_a)) {
    throw InvalidArgument("beam '" + name + "': alpha_a must be finite and >= 0");
  }
  if (!std::isfinite(theta)) throw InvalidArgument("beam '" + name + "': theta must be finite");
  if (h_mode == v_mode) throw InvalidArgument("beam '" + name + "': H and V modes coincide");
}

StokesVector stokes_means(const BrightBeam& beam) {
  const double aa = beam.alpha_a;
  const double ac = beam.alpha_c;
  return {aa * aa + ac * ac, aa * aa - ac * ac, 2.0 * aa * ac * std::cos(beam.theta),
          2.0 * aa * ac * std::sin(beam.theta)};
}

StokesVector stokes_from_fields(std::complex<double> a_h, std::complex<double> a_v, double theta) {
  const double nh = std::norm(a_h);
  const double nv = std::norm(a_v);
  // S2 + i S3 = 2 a_H^* a_V e^{i theta}
  const std::complex<double> z = std::conj(a_h) * a_v * std::polar(1.0, theta);
  return {nh + nv, nh - nv, 2.0 * z.real(), 2.0 * z.imag()};
}

StokesVector stokes_from_fluctuations(const BrightBeam& beam, std::complex<double> dh,
                                      std::complex<double> dv) {
  return stokes_from_fields(beam.alpha_a + dh, beam.alpha_c + dv, beam.theta);
}

Eigen::VectorXd stokes_fluctuation_form(const BrightBeam& beam, StokesIndex k, std::size_t n_modes,
                                        FormMode mode) {
  if (beam.h_mode.index >= n_modes || beam.v_mode.index >= n_modes) {
    throw InvalidArgument("beam '" + beam.name + "' references a mode outside the " +
                          std::to_string(n_modes) + "-mode state");
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n_modes));
  const auto hp = static_cast<Eigen::Index>(beam.h_mode.plus());
  const auto hm = static_cast<Eigen::Index>(beam.h_mode.minus());
  const auto vp = static_cast<Eigen::Index>(beam.v_mode.plus());
  const auto vm = static_cast<Eigen::Index>(beam.v_mode.minus());
  const double ac2 = 2.0 * beam.alpha_c;
  const double aa2 = mode == FormMode::full ? 2.0 * beam.alpha_a : 0.0;
  const double cs = std::cos(beam.theta);
  const double sn = std::sin(beam.theta);

  // First-order expansion of the Stokes operators around a_H = alpha_a,
  // a_V = alpha_c (both real), with a = X+ + i X-.
  switch (k) {
    case StokesIndex::S0:
      c(vp) = ac2;
      c(hp) = aa2;
      break;
    case StokesIndex::S1:
      c(vp) = -ac2;
      c(hp) = aa2;
      break;
    case StokesIndex::S2:
      // 2 alpha_c X_H(theta) + 2 alpha_a X_V(-theta)
      c(hp) = ac2 * cs;
      c(hm) = ac2 * sn;
      c(vp) = aa2 * cs;
      c(vm) = -aa2 * sn;
      break;
    case StokesIndex::S3:
      // -2 alpha_c X_H(theta + pi/2) + 2 alpha_a X_V(pi/2 - theta)
      c(hp) = ac2 * sn;
      c(hm) = -ac2 * cs;
      c(vp) = aa2 * sn;
      c(vm) = aa2 * cs;
      break;
  }
  return c;
}

Eigen::VectorXd stokes_combination_form(std::span<const BrightBeam> beams,
                                        std::span<const StokesTerm> terms, std::size_t n_modes,
                                        FormMode mode) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n_modes));
  for (const StokesTerm& t : terms) {
    if (t.beam >= beams.size()) {
      throw InvalidArgument("Stokes term references beam " + std::to_string(t.beam) + " of " +
                            std::to_string(beams.size()));
    }
    if (t.gain != 0.0) c += t.gain * stokes_fluctuation_form(beams[t.beam], t.k, n_modes, mode);
  }
  return c;
}

double stokes_combination_variance(const GaussianState& state, std::span<const BrightBeam> beams,
                                   std::span<const StokesTerm> terms, FormMode mode) {
  return linear_form_variance(state, stokes_combination_form(beams, terms, state.n_modes(), mode));
}

double snl_denominator(std::span<const BrightBeam> beams) {
  if (beams.empty()) throw InvalidArgument("shot-noise normalization needs at least one beam");
  const BrightBeam& ref = beams.front();
  for (const BrightBeam& b : beams) {
    if (std::abs(b.alpha_c - ref.alpha_c) > kPowerMatchTolerance ||
        std::abs(b.alpha_a - ref.alpha_a) > kPowerMatchTolerance) {
      throw UnsupportedConfiguration("beams '" + ref.name + "' and '" + b.name +
                                     "' have unequal powers; the criteria assume equal alpha_c "
                                     "and alpha_a on every beam");
    }
  }
  return 4.0 * std::abs(ref.alpha_c * ref.alpha_c - ref.alpha_a * ref.alpha_a);
}

}  // namespace tripol
