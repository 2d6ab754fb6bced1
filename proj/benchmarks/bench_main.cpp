#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fluctuant/classical_engine.hpp"
#include "fluctuant/classical_model.hpp"
#include "fluctuant/propagator.hpp"
#include "fluctuant/protocol.hpp"
#include "fluctuant/quantum_model.hpp"
#include "fluctuant/stats.hpp"
#include "fluctuant/tpm.hpp"

namespace {

using namespace fluctuant;

void BM_LeapfrogTrajectory(benchmark::State& state) {
  const auto model = ClassicalModel::harmonic(1.0, 1.0);
  const ForceProtocol p(LinearRampShape{0.0, 1.0}, 1.0, 1);
  const auto steps = static_cast<std::size_t>(state.range(0));
  PhasePoint z0{1.0, 0.3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(model, p, z0, steps));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_LeapfrogTrajectory)->Arg(200)->Arg(2000)->Arg(20000);

void BM_Propagator(benchmark::State& state) {
  const auto model = QuantumModel::two_level_zx();
  const ForceProtocol p(LinearRampShape{0.0, 1.0}, 1.0, 1);
  const auto slices = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagator(model, p, slices));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Propagator)->Arg(256)->Arg(1024)->Arg(4096);

void BM_TPMDistribution(benchmark::State& state) {
  const auto model = QuantumModel::four_level_degenerate();
  const ForceProtocol p(LinearRampShape{0.0, 1.0}, 1.0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpm_distribution(model, p, 1.0, 256));
  }
}
BENCHMARK(BM_TPMDistribution);

void BM_Histogram(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> samples(static_cast<std::size_t>(state.range(0)));
  for (auto& s : samples) s = gauss(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(histogram(samples));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Histogram)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
