#include <benchmark/benchmark.h>

#include <array>
#include <cstdint>

#include "tripol/circuit.hpp"
#include "tripol/criteria.hpp"
#include "tripol/mc.hpp"

namespace {

struct Fixture {
  tripol::CompiledCircuit net;
  tripol::mc::StokesFeatures features;
  tripol::mc::GaussianSampler sampler;

  static tripol::CompiledCircuit build() {
    tripol::NetworkParams p;
    p.fill({0.6, 0.0});
    return tripol::compile_circuit(tripol::ghz_preset(tripol::ghz_squeezers(p), 1.0, 0.0));
  }

  static std::vector<tripol::mc::StokesFeature> six_features() {
    using tripol::StokesIndex;
    std::vector<tripol::mc::StokesFeature> f;
    for (const auto& p : tripol::kCriterionPatterns) {
      f.push_back({{{p.diff_a, StokesIndex::S2, 1.0}, {p.diff_b, StokesIndex::S2, -1.0}}});
      f.push_back({{{0, StokesIndex::S3, 1.0}, {1, StokesIndex::S3, 1.0}, {2, StokesIndex::S3, 1.0}}});
    }
    return f;
  }

  Fixture()
      : net(build()),
        features(net.beams, six_features(), net.state.n_modes()),
        sampler(net.state) {}
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

constexpr std::array<tripol::mc::FeaturePair, 3> kPairs{{{0, 1}, {2, 3}, {4, 5}}};

void BM_AccumulateSerial(benchmark::State& state) {
  const Fixture& f = fixture();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tripol::mc::accumulate_serial(f.sampler, f.features, n, 7, kPairs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AccumulateParallel(benchmark::State& state) {
  const Fixture& f = fixture();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tripol::mc::accumulate_parallel(f.sampler, f.features, n, 7, kPairs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_AccumulateSerial)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AccumulateParallel)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
