#include <benchmark/benchmark.h>

#include "tautrel/kernels.hpp"

using namespace tautrel;

// Fresh table each iteration so the recursion actually runs.
static void BM_KernelCold(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto text = KernelTable::shipped_constants_text();
  for (auto _ : state) {
    state.PauseTiming();
    auto kt = KernelTable::from_constants(text);
    state.ResumeTiming();
    std::vector<int> d(static_cast<size_t>(k), 0);
    d[0] = g - 2 + k;
    benchmark::DoNotOptimize(kt->kernel(g, k, d, 0));
  }
}
BENCHMARK(BM_KernelCold)->Args({1, 3})->Args({1, 5})->Args({2, 3})->Args({2, 5})->Unit(benchmark::kMicrosecond);

static void BM_KernelSpecialize(benchmark::State& state) {
  const auto& kt = KernelTable::shipped();
  std::vector<MultiPoly> w;
  for (int i = 0; i < 3; ++i) w.push_back(MultiPoly::var_sum(vars_a(4), {i, 3}));
  for (auto _ : state) benchmark::DoNotOptimize(kt.kernel_at(2, 3, {1, 1, 0}, 1, w));
}
BENCHMARK(BM_KernelSpecialize)->Unit(benchmark::kMicrosecond);

static void BM_LoadConstants(benchmark::State& state) {
  const auto text = KernelTable::shipped_constants_text();
  for (auto _ : state) benchmark::DoNotOptimize(KernelTable::from_constants(text));
}
BENCHMARK(BM_LoadConstants)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
