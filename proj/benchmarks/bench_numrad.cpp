#include <benchmark/benchmark.h>

#include "numrad/harness.hpp"
#include "numrad/inequalities.hpp"
#include "numrad/linalg.hpp"
#include "numrad/numrange.hpp"
#include "numrad/random.hpp"

using namespace numrad;

static ComplexMatrix ginibre(std::size_t n, std::uint64_t seed = 1) {
  RngStream rng(seed);
  return generate(OperatorClass::Ginibre, n, rng);
}

static void BM_NumericalRadius(benchmark::State& state) {
  const ComplexMatrix a = ginibre(static_cast<std::size_t>(state.range(0)));
  std::size_t evals = 0;
  for (auto _ : state) {
    const RadiusEstimate est = numerical_radius(a, 1e-8);
    evals = est.evaluations;
    benchmark::DoNotOptimize(est.value);
  }
  state.counters["evaluations"] = static_cast<double>(evals);
}
BENCHMARK(BM_NumericalRadius)->RangeMultiplier(2)->Range(2, 64)->Unit(benchmark::kMicrosecond);

static void BM_DenseOracle(benchmark::State& state) {
  const ComplexMatrix a = ginibre(8);
  const auto angles = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(radius_dense_oracle(a, angles));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DenseOracle)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_HermitianEig(benchmark::State& state) {
  const ComplexMatrix g = ginibre(static_cast<std::size_t>(state.range(0)));
  const ComplexMatrix h = (g + g.adjoint()) * Complex(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(h));
}
BENCHMARK(BM_HermitianEig)->RangeMultiplier(2)->Range(4, 128)->Unit(benchmark::kMicrosecond);

static void BM_Svd(benchmark::State& state) {
  const ComplexMatrix a = ginibre(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(svd(a));
}
BENCHMARK(BM_Svd)->RangeMultiplier(2)->Range(4, 128)->Unit(benchmark::kMicrosecond);

static void BM_CheckAll(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RngStream rng(3);
  OperandBundle ops;
  ops.A = generate(OperatorClass::PsdInvertible, n, rng);
  ops.B = generate(OperatorClass::PsdInvertible, n, rng);
  ops.X = generate(OperatorClass::Ginibre, n, rng);
  const ParamGrid grid;
  for (auto _ : state) benchmark::DoNotOptimize(check_all(ops, grid));
}
BENCHMARK(BM_CheckAll)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Sweep(benchmark::State& state) {
  FuzzConfig config;
  config.trials = static_cast<std::size_t>(state.range(0));
  config.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(config));
}
BENCHMARK(BM_Sweep)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
