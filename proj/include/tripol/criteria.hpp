#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "tripol/gaussian.hpp"
#include "tripol/polarization.hpp"

namespace tripol {

/// Classical gains g1, g2, g3 applied to S3 of d1, d2, d3 in I1, I2, I3.
struct GainVector {
  std::array<double, 3> g{0.0, 0.0, 0.0};

  double operator[](std::size_t j) const { return g[j]; }
  double& operator[](std::size_t j) { return g[j]; }
  static GainVector uniform(double value) { return {{value, value, value}}; }
  friend bool operator==(const GainVector&, const GainVector&) = default;
};

struct CriteriaResult {
  std::array<double, 3> I{};
  GainVector gains;
  double snl = 0.0;
  double sum = 0.0;
  bool inseparable = false;
  bool genuine = false;
};

/// Squeezing parameter and excess anti-squeezing of one network input.
struct ModeParams {
  double r = 0.0;
  double r_prime = 0.0;
  friend bool operator==(const ModeParams&, const ModeParams&) = default;
};

/// Inputs a1 (phase-squeezed), a2, a3 (amplitude-squeezed).
using NetworkParams = std::array<ModeParams, 3>;

/// Squeezer specs for the GHZ network inputs with the right axes.
std::array<SqueezerSpec, 3> ghz_squeezers(const NetworkParams& params);

/// Which beams enter the two correlation variances of criterion j.
struct CriterionPattern {
  std::size_t diff_a;  // S2 difference  S2(diff_a) - S2(diff_b)
  std::size_t diff_b;
  std::size_t gained;  // S3 sum with the gain on this beam
};

inline constexpr std::array<CriterionPattern, 3> kCriterionPatterns{{
    {1, 2, 0},
    {0, 2, 1},
    {0, 1, 2},
}};

/// I_j from the state's covariance over the three beams d1, d2, d3, with the
/// exact 4|alpha_c^2 - alpha_a^2| normalization.
CriteriaResult evaluate_criteria(const GaussianState& state, std::span<const BrightBeam> beams,
                                 const GainVector& gains, FormMode mode = FormMode::reduced);

/// Normalized I_j closed forms in the alpha_a << alpha_c regime.
std::array<double, 3> closed_form_I(const NetworkParams& params, const GainVector& gains);

/// Optimal gains of the closed forms.
GainVector optimal_gains_closed_form(const NetworkParams& params);

struct OptimalGain {
  double gain = 0.0;
  double minimum = 0.0;  // I_j at that gain
};

/// I_j is quadratic in g_j; returns the vertex computed from covariances.
OptimalGain optimal_gain_numeric(const GaussianState& state, std::span<const BrightBeam> beams,
                                 std::size_t j, FormMode mode = FormMode::reduced);

GainVector optimal_gains_numeric(const GaussianState& state, std::span<const BrightBeam> beams,
                                 FormMode mode = FormMode::reduced);

struct GenuineCheck {
  double sum = 0.0;
  bool genuine = false;
};

/// Any biseparable mixture has I1 + I2 + I3 >= 2.
GenuineCheck genuine_bound_check(double i1, double i2, double i3);

/// At least two of the three inequalities I_j >= 1 violated.
bool inseparable_verdict(const std::array<double, 3>& values);

/// Input quadrature variances relative to vacuum that the closed forms depend
/// on. With a shared detection efficiency eta each factor f becomes
/// eta f + (1 - eta), since uniform loss commutes with the passive network.
struct NoiseFactors {
  double a1_minus = 1.0;  // e^{-2 r1}
  double a2_plus = 1.0;   // e^{-2 r2}
  double a2_minus = 1.0;  // e^{2 (r2 + r2')}
  double a3_plus = 1.0;   // e^{-2 r3}
  double a3_minus = 1.0;  // e^{2 (r3 + r3')}
};

NoiseFactors noise_factors(const NetworkParams& params, double eta = 1.0);

std::array<double, 3> closed_form_I(const NoiseFactors& f, const GainVector& gains);
GainVector optimal_gains(const NoiseFactors& f);

}  // namespace tripol
