#include "tripol/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tripol/error.hpp"

namespace tripol {

namespace {

void check_three(std::span<const BrightBeam> beams) {
  if (beams.size() != 3) {
    throw InvalidArgument("tripartite criteria need exactly three beams, got " +
                          std::to_string(beams.size()));
  }
}

double checked_snl(std::span<const BrightBeam> beams) {
  const double snl = snl_denominator(beams);
  if (!(snl > 0.0)) {
    throw NumericalError("degenerate shot-noise normalization: alpha_a == alpha_c");
  }
  return snl;
}

struct Forms {
  Eigen::VectorXd diff;    // S2(a) - S2(b)
  Eigen::VectorXd gained;  // S3 of the gained beam
  Eigen::VectorXd rest;    // S3 of the two others, unit gain
};

Forms criterion_forms(const GaussianState& state, std::span<const BrightBeam> beams, std::size_t j,
                      FormMode mode) {
  const CriterionPattern& p = kCriterionPatterns[j];
  const std::size_t n = state.n_modes();
  Forms f;
  f.diff = stokes_fluctuation_form(beams[p.diff_a], StokesIndex::S2, n, mode) -
           stokes_fluctuation_form(beams[p.diff_b], StokesIndex::S2, n, mode);
  f.gained = stokes_fluctuation_form(beams[p.gained], StokesIndex::S3, n, mode);
  f.rest = Eigen::VectorXd::Zero(f.gained.size());
  for (std::size_t b = 0; b < 3; ++b) {
    if (b != p.gained) f.rest += stokes_fluctuation_form(beams[b], StokesIndex::S3, n, mode);
  }
  return f;
}

}  // namespace

std::array<SqueezerSpec, 3> ghz_squeezers(const NetworkParams& params) {
  return {SqueezerSpec{params[0].r, params[0].r_prime, SqueezeAxis::phase},
          SqueezerSpec{params[1].r, params[1].r_prime, SqueezeAxis::amplitude},
          SqueezerSpec{params[2].r, params[2].r_prime, SqueezeAxis::amplitude}};
}

CriteriaResult evaluate_criteria(const GaussianState& state, std::span<const BrightBeam> beams,
                                 const GainVector& gains, FormMode mode) {
  check_three(beams);
  CriteriaResult out;
  out.snl = checked_snl(beams);
  out.gains = gains;
  for (std::size_t j = 0; j < 3; ++j) {
    const Forms f = criterion_forms(state, beams, j, mode);
    const Eigen::VectorXd sum_form = gains[j] * f.gained + f.rest;
    out.I[j] = (linear_form_variance(state, f.diff) + linear_form_variance(state, sum_form)) / out.snl;
  }
  const GenuineCheck g = genuine_bound_check(out.I[0], out.I[1], out.I[2]);
  out.sum = g.sum;
  out.genuine = g.genuine;
  out.inseparable = inseparable_verdict(out.I);
  return out;
}

NoiseFactors noise_factors(const NetworkParams& p, double eta) {
  auto lossy = [eta](double f) { return eta * f + (1.0 - eta); };
  return {lossy(std::exp(-2.0 * p[0].r)), lossy(std::exp(-2.0 * p[1].r)),
          lossy(std::exp(2.0 * (p[1].r + p[1].r_prime))), lossy(std::exp(-2.0 * p[2].r)),
          lossy(std::exp(2.0 * (p[2].r + p[2].r_prime)))};
}

std::array<double, 3> closed_form_I(const NoiseFactors& f, const GainVector& gains) {
  const double g1 = gains[0];
  const double g2 = gains[1];
  const double g3 = gains[2];
  auto sq = [](double x) { return x * x; };
  const double i1 =
      12.0 * f.a3_plus + 2.0 * sq(g1 + 2.0) * f.a1_minus + 4.0 * sq(g1 - 1.0) * f.a2_minus;
  auto i23 = [&](double g) {
    return 3.0 * f.a3_plus + 9.0 * f.a2_plus + 2.0 * sq(g + 2.0) * f.a1_minus +
           3.0 * sq(g - 1.0) * f.a3_minus + sq(g - 1.0) * f.a2_minus;
  };
  return {i1 / 24.0, i23(g2) / 24.0, i23(g3) / 24.0};
}

std::array<double, 3> closed_form_I(const NetworkParams& params, const GainVector& gains) {
  return closed_form_I(noise_factors(params), gains);
}

GainVector optimal_gains(const NoiseFactors& f) {
  // Vertices of the quadratics in closed_form_I.
  const double g1 = (2.0 * f.a2_minus - 2.0 * f.a1_minus) / (f.a1_minus + 2.0 * f.a2_minus);
  const double b = f.a2_minus + 3.0 * f.a3_minus;
  const double g23 = (b - 4.0 * f.a1_minus) / (b + 2.0 * f.a1_minus);
  return {{g1, g23, g23}};
}

GainVector optimal_gains_closed_form(const NetworkParams& p) {
  const double e2 = std::exp(2.0 * p[0].r + 2.0 * p[1].r + 2.0 * p[1].r_prime);
  const double e3 = std::exp(2.0 * p[0].r + 2.0 * p[2].r + 2.0 * p[2].r_prime);
  const double g1 = (2.0 * e2 - 2.0) / (2.0 * e2 + 1.0);
  const double g23 = (e2 + 3.0 * e3 - 4.0) / (e2 + 3.0 * e3 + 2.0);
  return {{g1, g23, g23}};
}

OptimalGain optimal_gain_numeric(const GaussianState& state, std::span<const BrightBeam> beams,
                                 std::size_t j, FormMode mode) {
  check_three(beams);
  if (j >= 3) throw InvalidArgument("criterion index must be 0, 1 or 2");
  const double snl = checked_snl(beams);
  const Forms f = criterion_forms(state, beams, j, mode);
  // Var(g u + w) = A g^2 + B g + C
  const double a = linear_form_variance(state, f.gained);
  const double half_b = linear_form_covariance(state, f.gained, f.rest);
  const double c = linear_form_variance(state, f.rest);
  if (!(a > 0.0)) {
    throw NumericalError("criterion " + std::to_string(j + 1) +
                         " is not strictly convex in its gain (A = " + std::to_string(a) + ")");
  }
  OptimalGain out;
  out.gain = half_b == 0.0 ? 0.0 : -half_b / a;
  const double sum_var = std::max(0.0, c - half_b * half_b / a);
  out.minimum = (linear_form_variance(state, f.diff) + sum_var) / snl;
  return out;
}

GainVector optimal_gains_numeric(const GaussianState& state, std::span<const BrightBeam> beams,
                                 FormMode mode) {
  GainVector g;
  for (std::size_t j = 0; j < 3; ++j) g[j] = optimal_gain_numeric(state, beams, j, mode).gain;
  return g;
}

GenuineCheck genuine_bound_check(double i1, double i2, double i3) {
  const double sum = i1 + i2 + i3;
  return {sum, sum < 2.0};
}

bool inseparable_verdict(const std::array<double, 3>& values) {
  int violated = 0;
  for (double v : values) violated += v < 1.0 ? 1 : 0;
  return violated >= 2;
}

}  // namespace tripol
