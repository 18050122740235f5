#include "tripol/mc_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tripol/error.hpp"

namespace tripol::mc {

GaussianSampler::GaussianSampler(const GaussianState& state) : mean_(state.mean()) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(state.cov());
  if (solver.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");
  Eigen::VectorXd lambda = solver.eigenvalues();
  if (lambda.minCoeff() < kEigenvalueFloor) {
    throw NumericalError("invalid state: covariance is not positive semidefinite (min eigenvalue " +
                         std::to_string(lambda.minCoeff()) + ")");
  }
  lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  factor_ = solver.eigenvectors() * lambda.asDiagonal();
}

std::mt19937_64 GaussianSampler::block_engine(std::uint64_t seed, std::size_t block) {
  const auto b = static_cast<std::uint64_t>(block);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

void LinearFeatures::evaluate(std::span<const double> x, std::span<double> y) const {
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  yv.noalias() = rows_ * xv;
}

double FeatureStats::mean_se(std::size_t k) const {
  return std::sqrt(variance[k] / static_cast<double>(n));
}

double FeatureStats::variance_se(std::size_t k) const {
  return std::sqrt(std::max(0.0, variance_sampling_var[k]));
}

double FeatureStats::variance_sampling_cov(std::size_t a, std::size_t b) const {
  if (a == b) return variance_sampling_var[a];
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if ((pairs[p].first == a && pairs[p].second == b) || (pairs[p].first == b && pairs[p].second == a)) {
      return pair_sampling_cov[p];
    }
  }
  throw InvalidArgument("sampling covariance of features " + std::to_string(a) + " and " +
                        std::to_string(b) + " was not accumulated");
}

std::vector<double> pairwise_row_sum(const std::vector<double>& rows, std::size_t width,
                                     std::size_t count) {
  std::vector<double> out(width, 0.0);
  if (count == 0) return out;
  if (count == 1) {
    std::copy_n(rows.begin(), width, out.begin());
    return out;
  }
  // Bottom-up cascade over a scratch copy; the tree shape depends only on count.
  std::vector<double> work(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(count * width));
  for (std::size_t stride = 1; stride < count; stride *= 2) {
    for (std::size_t i = 0; i + stride < count; i += 2 * stride) {
      double* dst = &work[i * width];
      const double* src = &work[(i + stride) * width];
      for (std::size_t k = 0; k < width; ++k) dst[k] += src[k];
    }
  }
  std::copy_n(work.begin(), width, out.begin());
  return out;
}

namespace {

template <typename Body>
void for_each_block(Exec exec, std::size_t n_blocks, Body&& body) {
  if (exec == Exec::serial) {
    for (std::size_t b = 0; b < n_blocks; ++b) body(b);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < n_blocks; ++b) body(b);
}

FeatureStats accumulate_impl(const GaussianSampler& sampler, const FeatureMap& features,
                             std::size_t n, std::uint64_t seed, std::span<const FeaturePair> pairs,
                             Exec exec) {
  if (n < 2) throw InvalidArgument("moment accumulation needs at least two samples");
  const std::size_t k_count = features.size();
  for (const FeaturePair& p : pairs) {
    if (p.first >= k_count || p.second >= k_count) throw InvalidArgument("feature pair out of range");
  }
  const std::size_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  auto block_count = [&](std::size_t b) { return std::min(kBlockSize, n - b * kBlockSize); };
  const double nd = static_cast<double>(n);

  // Pass 1: means.
  std::vector<double> partial(n_blocks * k_count, 0.0);
  for_each_block(exec, n_blocks, [&](std::size_t b) {
    std::vector<double> y(k_count);
    double* acc = &partial[b * k_count];
    sampler.for_each_in_block(seed, b, block_count(b), [&](std::size_t, std::span<const double> x) {
      features.evaluate(x, y);
      for (std::size_t k = 0; k < k_count; ++k) acc[k] += y[k];
    });
  });
  std::vector<double> mean = pairwise_row_sum(partial, k_count, n_blocks);
  for (double& m : mean) m /= nd;

  // Pass 2: central moments, regenerating the same samples.
  const std::size_t width = 2 * k_count + pairs.size();
  partial.assign(n_blocks * width, 0.0);
  for_each_block(exec, n_blocks, [&](std::size_t b) {
    std::vector<double> y(k_count);
    std::vector<double> d(k_count);
    double* acc = &partial[b * width];
    sampler.for_each_in_block(seed, b, block_count(b), [&](std::size_t, std::span<const double> x) {
      features.evaluate(x, y);
      for (std::size_t k = 0; k < k_count; ++k) {
        const double dev = y[k] - mean[k];
        d[k] = dev * dev;
        acc[k] += d[k];
        acc[k_count + k] += d[k] * d[k];
      }
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        acc[2 * k_count + p] += d[pairs[p].first] * d[pairs[p].second];
      }
    });
  });
  const std::vector<double> sums = pairwise_row_sum(partial, width, n_blocks);

  FeatureStats out;
  out.n = n;
  out.mean = std::move(mean);
  out.variance.resize(k_count);
  out.variance_sampling_var.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double m2 = sums[k] / nd;
    out.variance[k] = sums[k] / (nd - 1.0);
    out.variance_sampling_var[k] = (sums[k_count + k] / nd - m2 * m2) / nd;
  }
  out.pairs.assign(pairs.begin(), pairs.end());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double ma = sums[pairs[p].first] / nd;
    const double mb = sums[pairs[p].second] / nd;
    out.pair_sampling_cov.push_back((sums[2 * k_count + p] / nd - ma * mb) / nd);
  }
  return out;
}

}  // namespace

FeatureStats accumulate_serial(const GaussianSampler& sampler, const FeatureMap& features,
                               std::size_t n, std::uint64_t seed, std::span<const FeaturePair> pairs) {
  return accumulate_impl(sampler, features, n, seed, pairs, Exec::serial);
}

FeatureStats accumulate_parallel(const GaussianSampler& sampler, const FeatureMap& features,
                                 std::size_t n, std::uint64_t seed,
                                 std::span<const FeaturePair> pairs) {
  return accumulate_impl(sampler, features, n, seed, pairs, Exec::parallel);
}

FeatureStats accumulate(const GaussianSampler& sampler, const FeatureMap& features, std::size_t n,
                        std::uint64_t seed, std::span<const FeaturePair> pairs, Exec exec) {
  return accumulate_impl(sampler, features, n, seed, pairs, exec);
}

}  // namespace tripol::mc
