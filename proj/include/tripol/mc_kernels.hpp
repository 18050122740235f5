#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tripol/gaussian.hpp"

namespace tripol::mc {

// Samples are drawn in fixed blocks. Block b uses its own engine seeded from
// (seed, b), so a seed and a sample index fully determine every draw and any
// partition of the blocks across threads yields the same samples.
inline constexpr std::size_t kBlockSize = 4096;

enum class Exec { serial, parallel };

class GaussianSampler {
 public:
  /// Factorizes cov = L L^T through its eigendecomposition. Eigenvalues in
  /// [-1e-10, 0) are treated as zero; anything below throws NumericalError.
  explicit GaussianSampler(const GaussianState& state);

  std::size_t dim() const { return static_cast<std::size_t>(mean_.size()); }

  static std::mt19937_64 block_engine(std::uint64_t seed, std::size_t block);

  /// Calls f(index, x) for samples [block * kBlockSize, ... + count) in order.
  template <typename F>
  void for_each_in_block(std::uint64_t seed, std::size_t block, std::size_t count, F&& f) const {
    std::mt19937_64 engine = block_engine(seed, block);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(mean_.size());
    Eigen::VectorXd x(mean_.size());
    const std::size_t first = block * kBlockSize;
    for (std::size_t i = 0; i < count; ++i) {
      for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = normal(engine);
      x.noalias() = mean_ + factor_ * z;
      f(first + i, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    }
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd factor_;
};

/// Per-sample feature values y = phi(x).
class FeatureMap {
 public:
  virtual ~FeatureMap() = default;
  virtual std::size_t size() const = 0;
  virtual void evaluate(std::span<const double> x, std::span<double> y) const = 0;
};

/// y = rows * x.
class LinearFeatures final : public FeatureMap {
 public:
  explicit LinearFeatures(Eigen::MatrixXd rows) : rows_(std::move(rows)) {}
  std::size_t size() const override { return static_cast<std::size_t>(rows_.rows()); }
  void evaluate(std::span<const double> x, std::span<double> y) const override;

 private:
  Eigen::MatrixXd rows_;
};

using FeaturePair = std::pair<std::size_t, std::size_t>;

/// Sample moments of the features. Variances are unbiased (n - 1); the
/// sampling variance of each variance estimate is (m4 - s^4)/n, and for the
/// requested pairs Cov(s_a^2, s_b^2) = (E[d_a d_b] - s_a^2 s_b^2)/n with
/// d = (y - mean)^2.
struct FeatureStats {
  std::size_t n = 0;
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> variance_sampling_var;
  std::vector<FeaturePair> pairs;
  std::vector<double> pair_sampling_cov;

  double mean_se(std::size_t k) const;
  double variance_se(std::size_t k) const;
  /// Sampling covariance of the variance estimates of features a and b.
  double variance_sampling_cov(std::size_t a, std::size_t b) const;

  friend bool operator==(const FeatureStats&, const FeatureStats&) = default;
};

/// Reference implementation: blocks processed one after another.
FeatureStats accumulate_serial(const GaussianSampler& sampler, const FeatureMap& features,
                               std::size_t n, std::uint64_t seed,
                               std::span<const FeaturePair> pairs = {});

/// OpenMP over blocks; block partials are combined in the same fixed pairwise
/// order as the serial path, so the two agree bit for bit.
FeatureStats accumulate_parallel(const GaussianSampler& sampler, const FeatureMap& features,
                                 std::size_t n, std::uint64_t seed,
                                 std::span<const FeaturePair> pairs = {});

FeatureStats accumulate(const GaussianSampler& sampler, const FeatureMap& features, std::size_t n,
                        std::uint64_t seed, std::span<const FeaturePair> pairs = {},
                        Exec exec = Exec::parallel);

/// Pairwise (cascade) sum of `count` rows of `width` values, rows in order.
std::vector<double> pairwise_row_sum(const std::vector<double>& rows, std::size_t width,
                                     std::size_t count);

}  // namespace tripol::mc
