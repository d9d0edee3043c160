#include <benchmark/benchmark.h>

#include "vise/environments.hpp"
#include "vise/montecarlo.hpp"
#include "vise/numerics.hpp"
#include "vise/voting.hpp"

namespace {

using vise::env::Normal;

void BM_IncompleteBeta(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(vise::numerics::regularized_incomplete_beta(0.47, a, a + 1.0));
  }
}
BENCHMARK(BM_IncompleteBeta)->Arg(5)->Arg(100)->Arg(10000);

const vise::env::EnvironmentStats& normal_stats() {
  static const auto s = vise::env::stats(Normal{-0.2, 1.0});
  return s;
}

// The three forms of E(eta) at n0 = n / 2.
void BM_ExpectedIncrementSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vise::voting::expected_increment_sum(normal_stats(), n, n / 2));
}
BENCHMARK(BM_ExpectedIncrementSum)->Arg(21)->Arg(131)->Arg(10000);

void BM_ExpectedIncrementBeta(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vise::voting::expected_increment_beta(normal_stats(), n, n / 2));
}
BENCHMARK(BM_ExpectedIncrementBeta)->Arg(21)->Arg(131)->Arg(10000);

void BM_ExpectedIncrementIncompleteBeta(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(vise::voting::expected_increment_incomplete_beta(normal_stats(), n, n / 2));
  }
}
BENCHMARK(BM_ExpectedIncrementIncompleteBeta)->Arg(21)->Arg(131)->Arg(10000);

void BM_OptimalLadder(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vise::voting::optimal_absolute_threshold(normal_stats(), n));
}
BENCHMARK(BM_OptimalLadder)->Arg(21)->Arg(10000);

void BM_MonteCarlo(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const vise::env::DistributionSpec spec = Normal{-0.2, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(vise::mc::estimate_expected_increment(spec, n, 0.5, 10000, 7));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_MonteCarlo)->Arg(5)->Arg(21)->Arg(131)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
