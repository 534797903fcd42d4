#include <benchmark/benchmark.h>

#include "tautrel/wk.hpp"

using namespace tautrel;

// Memoized: after the first iteration this times the lookup path.
static void BM_WkWarm(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wk_integral(g, {3 * g - 2}));
}
BENCHMARK(BM_WkWarm)->DenseRange(1, 6);

static void BM_WkGenus0Closed(benchmark::State& state) {
  std::vector<int> d(static_cast<size_t>(state.range(0)), 0);
  d[0] = static_cast<int>(state.range(0)) - 3;
  for (auto _ : state) benchmark::DoNotOptimize(wk_genus0_closed(d));
}
BENCHMARK(BM_WkGenus0Closed)->DenseRange(4, 10, 2);

static void BM_WkMixed(benchmark::State& state) {
  for (auto _ : state) {
    Rational s = 0;
    for (int a = 0; a <= 7; ++a) s += wk_integral(3, {a, 7 - a, 0, 1, 1});
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_WkMixed);

BENCHMARK_MAIN();
