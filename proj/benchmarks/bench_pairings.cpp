#include <benchmark/benchmark.h>

#include "tautrel/classes.hpp"
#include "tautrel/trees.hpp"

using namespace tautrel;

static void BM_PairB(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(pair_B(g, n, 2, {0, 0}));
}
BENCHMARK(BM_PairB)->Args({0, 4})->Args({1, 3})->Args({2, 2})->Unit(benchmark::kMillisecond);

static void BM_PairA(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(pair_A(g, n, 0));
}
BENCHMARK(BM_PairA)->Args({0, 4})->Args({1, 3})->Args({2, 3})->Unit(benchmark::kMillisecond);

static void BM_PairXi(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(pair_Xi(g, n, 1, {0}));
}
BENCHMARK(BM_PairXi)->Args({0, 4})->Args({1, 4})->Args({2, 4})->Unit(benchmark::kMillisecond);

static void BM_EnumerateLeveled(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_ldlsrt(2, n, 1));
}
BENCHMARK(BM_EnumerateLeveled)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
