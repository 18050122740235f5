#include "tripol/mc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tripol/error.hpp"

namespace tripol::mc {

namespace {

void check_sample_count(std::size_t n) {
  if (n < kMinSamples) {
    throw InvalidArgument("n=" + std::to_string(n) + " is below the minimum of " +
                          std::to_string(kMinSamples) +
                          " samples; standard errors would be meaningless");
  }
}

void check_beams(const GaussianState& state, std::span<const BrightBeam> beams) {
  for (const BrightBeam& b : beams) {
    b.validate();
    state.check_mode(b.h_mode);
    state.check_mode(b.v_mode);
  }
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

std::span<const double> SampleBatch::sample(std::size_t i) const {
  if (i >= n_samples) throw InvalidArgument("sample index out of range");
  return {quadratures.data() + i * 2 * n_modes, 2 * n_modes};
}

std::complex<double> SampleBatch::field(std::size_t i, ModeId mode) const {
  if (mode.index >= n_modes) throw InvalidArgument("mode index out of range");
  const std::span<const double> x = sample(i);
  return {x[mode.plus()], x[mode.minus()]};
}

SampleBatch sample_quadratures(const GaussianState& state, std::size_t n, std::uint64_t seed,
                               Exec exec) {
  if (n == 0) throw InvalidArgument("sample count must be >= 1");
  const GaussianSampler sampler(state);
  SampleBatch batch;
  batch.n_samples = n;
  batch.seed = seed;
  batch.n_modes = state.n_modes();
  const std::size_t dim = sampler.dim();
  batch.quadratures.resize(n * dim);
  const std::size_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  auto fill = [&](std::size_t b) {
    const std::size_t count = std::min(kBlockSize, n - b * kBlockSize);
    sampler.for_each_in_block(seed, b, count, [&](std::size_t i, std::span<const double> x) {
      std::copy(x.begin(), x.end(), batch.quadratures.begin() + static_cast<std::ptrdiff_t>(i * dim));
    });
  };
  if (exec == Exec::serial) {
    for (std::size_t b = 0; b < n_blocks; ++b) fill(b);
  } else {
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < n_blocks; ++b) fill(b);
  }
  return batch;
}

std::string_view to_string(StokesEval eval) {
  return eval == StokesEval::exact ? "exact" : "linearized";
}

StokesEval parse_stokes_eval(std::string_view name) {
  if (name == "linearized") return StokesEval::linearized;
  if (name == "exact") return StokesEval::exact;
  throw InvalidArgument("unknown Stokes evaluation '" + std::string(name) +
                        "' (expected linearized or exact)");
}

StokesFeatures::StokesFeatures(std::vector<BrightBeam> beams, std::vector<StokesFeature> features,
                               std::size_t n_modes)
    : beams_(std::move(beams)), features_(std::move(features)) {
  const auto k_count = static_cast<Eigen::Index>(features_.size());
  rows_ = Eigen::MatrixXd::Zero(k_count, static_cast<Eigen::Index>(2 * n_modes));
  offsets_ = Eigen::VectorXd::Zero(k_count);
  for (Eigen::Index f = 0; f < k_count; ++f) {
    const StokesFeature& feat = features_[static_cast<std::size_t>(f)];
    if (feat.eval == StokesEval::exact) {
      any_exact_ = true;
      for (const StokesTerm& t : feat.terms) {
        if (t.beam >= beams_.size()) throw InvalidArgument("Stokes term references a missing beam");
      }
      continue;
    }
    rows_.row(f) = stokes_combination_form(beams_, feat.terms, n_modes, feat.form).transpose();
    for (const StokesTerm& t : feat.terms) {
      offsets_(f) += t.gain * stokes_means(beams_[t.beam])[static_cast<std::size_t>(t.k)];
    }
  }
}

void StokesFeatures::evaluate(std::span<const double> x, std::span<double> y) const {
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  yv.noalias() = rows_ * xv;
  yv += offsets_;
  if (!any_exact_) return;

  // Exact Stokes values of every beam for this sample.
  thread_local std::vector<StokesVector> exact;
  exact.resize(beams_.size());
  for (std::size_t b = 0; b < beams_.size(); ++b) {
    const BrightBeam& beam = beams_[b];
    const std::complex<double> dh{x[beam.h_mode.plus()], x[beam.h_mode.minus()]};
    const std::complex<double> dv{x[beam.v_mode.plus()], x[beam.v_mode.minus()]};
    exact[b] = stokes_from_fluctuations(beam, dh, dv);
    exact[b][0] -= 1.0;
  }
  for (std::size_t f = 0; f < features_.size(); ++f) {
    if (features_[f].eval != StokesEval::exact) continue;
    double v = 0.0;
    for (const StokesTerm& t : features_[f].terms) {
      v += t.gain * exact[t.beam][static_cast<std::size_t>(t.k)];
    }
    y[f] = v;
  }
}

McCriteria mc_criteria(const GaussianState& state, std::span<const BrightBeam> beams,
                       const GainVector& gains, const McOptions& options) {
  check_sample_count(options.n);
  if (beams.size() != 3) {
    throw InvalidArgument("tripartite criteria need exactly three beams, got " +
                          std::to_string(beams.size()));
  }
  check_beams(state, beams);
  const double snl = snl_denominator(beams);
  if (!(snl > 0.0)) throw NumericalError("degenerate shot-noise normalization: alpha_a == alpha_c");

  std::vector<StokesFeature> features;
  for (std::size_t j = 0; j < 3; ++j) {
    const CriterionPattern& p = kCriterionPatterns[j];
    features.push_back({{{p.diff_a, StokesIndex::S2, 1.0}, {p.diff_b, StokesIndex::S2, -1.0}},
                        options.eval,
                        options.form});
    StokesFeature sum{{}, options.eval, options.form};
    for (std::size_t b = 0; b < 3; ++b) {
      sum.terms.push_back({b, StokesIndex::S3, b == p.gained ? gains[j] : 1.0});
    }
    features.push_back(std::move(sum));
  }
  const StokesFeatures map({beams.begin(), beams.end()}, std::move(features), state.n_modes());
  const GaussianSampler sampler(state);
  const std::array<FeaturePair, 3> pairs{{{0, 1}, {2, 3}, {4, 5}}};
  const FeatureStats stats = accumulate(sampler, map, options.n, options.seed, pairs, options.exec);

  McCriteria out;
  out.gains = gains;
  out.snl = snl;
  out.n = options.n;
  out.seed = options.seed;
  for (std::size_t j = 0; j < 3; ++j) {
    const std::size_t d = 2 * j;
    const std::size_t s = 2 * j + 1;
    const double var = stats.variance_sampling_var[d] + stats.variance_sampling_var[s] +
                       2.0 * stats.variance_sampling_cov(d, s);
    out.I[j] = {(stats.variance[d] + stats.variance[s]) / snl, std::sqrt(std::max(0.0, var)) / snl};
  }
  return out;
}

std::vector<BeamStokes> mc_stokes(const GaussianState& state, std::span<const BrightBeam> beams,
                                  const McOptions& options) {
  check_sample_count(options.n);
  check_beams(state, beams);
  std::vector<StokesFeature> features;
  for (std::size_t b = 0; b < beams.size(); ++b) {
    for (std::size_t k = 0; k < 4; ++k) {
      features.push_back({{{b, static_cast<StokesIndex>(k), 1.0}}, options.eval, options.form});
    }
  }
  const StokesFeatures map({beams.begin(), beams.end()}, std::move(features), state.n_modes());
  const FeatureStats stats =
      accumulate(GaussianSampler(state), map, options.n, options.seed, {}, options.exec);

  std::vector<BeamStokes> out(beams.size());
  for (std::size_t b = 0; b < beams.size(); ++b) {
    out[b].name = beams[b].name;
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t f = 4 * b + k;
      out[b].mean[k] = {stats.mean[f], stats.mean_se(f)};
      out[b].variance[k] = {stats.variance[f], stats.variance_se(f)};
    }
  }
  return out;
}

std::vector<LinearizationRow> validate_linearization(const GaussianState& state,
                                                     std::span<const BrightBeam> beams,
                                                     std::span<const double> ratios,
                                                     const McOptions& options) {
  check_sample_count(options.n);
  check_beams(state, beams);
  for (double ratio : ratios) {
    if (!(ratio > 0.0 && ratio <= 1.0)) {
      throw InvalidArgument("intensity ratios must lie in (0, 1], got " + std::to_string(ratio));
    }
  }
  const GaussianSampler sampler(state);
  std::vector<LinearizationRow> rows;
  for (double ratio : ratios) {
    std::vector<BrightBeam> scaled(beams.begin(), beams.end());
    for (BrightBeam& b : scaled) b.alpha_a = b.alpha_c * std::sqrt(ratio);

    // Per beam: exact, full and reduced features for S0..S3, all on the same samples.
    std::vector<StokesFeature> features;
    for (std::size_t b = 0; b < scaled.size(); ++b) {
      for (std::size_t k = 0; k < 4; ++k) {
        const StokesTerm t{b, static_cast<StokesIndex>(k), 1.0};
        features.push_back({{t}, StokesEval::exact, FormMode::full});
        features.push_back({{t}, StokesEval::linearized, FormMode::full});
        features.push_back({{t}, StokesEval::linearized, FormMode::reduced});
      }
    }
    const StokesFeatures map(scaled, std::move(features), state.n_modes());
    const FeatureStats stats = accumulate(sampler, map, options.n, options.seed, {}, options.exec);

    LinearizationRow row;
    row.ratio = ratio;
    row.alpha_a = scaled.empty() ? 0.0 : scaled.front().alpha_a;
    for (std::size_t b = 0; b < scaled.size(); ++b) {
      for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t f = 3 * (4 * b + k);
        LinearizationEntry e;
        e.beam = scaled[b].name;
        e.k = static_cast<StokesIndex>(k);
        e.exact = stats.variance[f];
        e.full = stats.variance[f + 1];
        e.approx = stats.variance[f + 2];
        e.deviation_full = relative(e.exact, e.full);
        e.deviation_approx = relative(e.exact, e.approx);
        row.max_deviation_full = std::max(row.max_deviation_full, e.deviation_full);
        row.max_deviation_approx = std::max(row.max_deviation_approx, e.deviation_approx);
        row.entries.push_back(std::move(e));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tripol::mc
