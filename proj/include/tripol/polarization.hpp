#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "tripol/gaussian.hpp"

namespace tripol {

enum class StokesIndex { S0 = 0, S1 = 1, S2 = 2, S3 = 3 };

/// reduced keeps only the alpha_c-weighted fluctuation terms (valid for
/// alpha_a^2 << alpha_c^2); full is the complete first-order expansion.
enum class FormMode { reduced, full };

/// A bright polarization beam: weak H-polarized quantum mode combined with a
/// strong V-polarized coherent beam on a polarizing beam splitter.
struct BrightBeam {
  std::string name;
  ModeId h_mode;
  ModeId v_mode;
  double alpha_c = 1.0;  // coherent V amplitude, sqrt(photon flux)
  double alpha_a = 0.0;  // mean H amplitude
  double theta = 0.0;    // relative H/V phase, radians

  void validate() const;

  /// alpha_a^2 / alpha_c^2 <= 0.1, the regime where the linearization holds.
  bool bright_regime() const { return alpha_a * alpha_a <= 0.1 * alpha_c * alpha_c; }

  friend bool operator==(const BrightBeam&, const BrightBeam&) = default;
};

using StokesVector = std::array<double, 4>;

/// Mean Stokes vector (S0, S1, S2, S3) of the beam.
StokesVector stokes_means(const BrightBeam& beam);

/// Stokes values for explicit complex field amplitudes (c-number functions).
StokesVector stokes_from_fields(std::complex<double> a_h, std::complex<double> a_v, double theta);

/// Stokes values when the beam's H and V fields fluctuate by `dh`, `dv`
/// around (alpha_a, alpha_c).
StokesVector stokes_from_fluctuations(const BrightBeam& beam, std::complex<double> dh,
                                      std::complex<double> dv);

/// Linear form c with dS_k ~= c^T d(xi) over the 2n quadratures of the state.
Eigen::VectorXd stokes_fluctuation_form(const BrightBeam& beam, StokesIndex k, std::size_t n_modes,
                                        FormMode mode = FormMode::reduced);

struct StokesTerm {
  std::size_t beam = 0;
  StokesIndex k = StokesIndex::S2;
  double gain = 1.0;
};

/// Linear form of sum_j gain_j * dS_{k_j}(beam_j).
Eigen::VectorXd stokes_combination_form(std::span<const BrightBeam> beams,
                                        std::span<const StokesTerm> terms, std::size_t n_modes,
                                        FormMode mode = FormMode::reduced);

double stokes_combination_variance(const GaussianState& state, std::span<const BrightBeam> beams,
                                   std::span<const StokesTerm> terms,
                                   FormMode mode = FormMode::reduced);

/// 4 |alpha_c^2 - alpha_a^2| for beams sharing one (alpha_c, alpha_a) pair.
double snl_denominator(std::span<const BrightBeam> beams);

}  // namespace tripol
