#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tripol/criteria.hpp"
#include "tripol/gaussian.hpp"
#include "tripol/mc_kernels.hpp"
#include "tripol/polarization.hpp"

namespace tripol::mc {

inline constexpr std::size_t kMinSamples = 1000;

/// n draws of the full quadrature vector, row-major (n x 2 n_modes).
struct SampleBatch {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::size_t n_modes = 0;
  std::vector<double> quadratures;

  std::span<const double> sample(std::size_t i) const;
  /// a = X+ + i X- of one mode in sample i.
  std::complex<double> field(std::size_t i, ModeId mode) const;

  friend bool operator==(const SampleBatch&, const SampleBatch&) = default;
};

SampleBatch sample_quadratures(const GaussianState& state, std::size_t n, std::uint64_t seed,
                               Exec exec = Exec::parallel);

/// linearized: Stokes value = mean + form . x. exact: Stokes products of the
/// sampled complex fields, with S0 shifted by -1 (the Wigner average of
/// |a_H|^2 + |a_V|^2 exceeds the normally ordered one by 1/2 per mode).
enum class StokesEval { linearized, exact };

std::string_view to_string(StokesEval eval);
StokesEval parse_stokes_eval(std::string_view name);

struct McOptions {
  std::size_t n = 1'000'000;
  std::uint64_t seed = 1;
  StokesEval eval = StokesEval::linearized;
  FormMode form = FormMode::reduced;  // linearized mode only
  Exec exec = Exec::parallel;
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
  friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// One sampled scalar: sum of gain * S_k(beam) over its terms.
struct StokesFeature {
  std::vector<StokesTerm> terms;
  StokesEval eval = StokesEval::linearized;
  FormMode form = FormMode::reduced;
};

class StokesFeatures final : public FeatureMap {
 public:
  StokesFeatures(std::vector<BrightBeam> beams, std::vector<StokesFeature> features,
                 std::size_t n_modes);

  std::size_t size() const override { return features_.size(); }
  void evaluate(std::span<const double> x, std::span<double> y) const override;

 private:
  std::vector<BrightBeam> beams_;
  std::vector<StokesFeature> features_;
  Eigen::MatrixXd rows_;
  Eigen::VectorXd offsets_;
  bool any_exact_ = false;
};

struct McCriteria {
  std::array<Estimate, 3> I{};
  GainVector gains;
  double snl = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Sampled I1, I2, I3 with standard errors propagated from the sampling
/// (co)variances of the two variance estimates in each criterion.
McCriteria mc_criteria(const GaussianState& state, std::span<const BrightBeam> beams,
                       const GainVector& gains, const McOptions& options);

struct BeamStokes {
  std::string name;
  std::array<Estimate, 4> mean{};
  std::array<Estimate, 4> variance{};
};

std::vector<BeamStokes> mc_stokes(const GaussianState& state, std::span<const BrightBeam> beams,
                                  const McOptions& options);

struct LinearizationEntry {
  std::string beam;
  StokesIndex k = StokesIndex::S0;
  double exact = 0.0;
  double full = 0.0;
  double approx = 0.0;
  double deviation_full = 0.0;    // |exact - full| / full
  double deviation_approx = 0.0;  // |exact - approx| / approx
};

struct LinearizationRow {
  double ratio = 0.0;  // alpha_a^2 / alpha_c^2
  double alpha_a = 0.0;
  std::vector<LinearizationEntry> entries;
  double max_deviation_full = 0.0;
  double max_deviation_approx = 0.0;
};

/// For each ratio, sets alpha_a = alpha_c sqrt(ratio) on every beam and
/// compares exact and linearized Stokes variances on the same samples.
std::vector<LinearizationRow> validate_linearization(const GaussianState& state,
                                                     std::span<const BrightBeam> beams,
                                                     std::span<const double> ratios,
                                                     const McOptions& options);

}  // namespace tripol::mc
