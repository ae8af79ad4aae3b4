#include <benchmark/benchmark.h>

#include "fbmlt/fbm.hpp"
#include "fbmlt/functionals.hpp"
#include "fbmlt/pair_sum.hpp"

namespace {

using namespace fbmlt;

const MollifierSpec kSpec(0.05, MultiIndex{1, 0});

FbmPath bench_path(int n, std::uint64_t stream) {
  return sample_circulant(TimeGrid(1.0, n), 0.75, 2, RngStream(11, stream));
}

void BM_SelfPairSerial(benchmark::State& state) {
  const auto p = bench_path(static_cast<int>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::self_pair_sum_serial(p.values, kSpec));
  state.SetComplexityN(state.range(0));
}

void BM_SelfPairTiled(benchmark::State& state) {
  const auto p = bench_path(static_cast<int>(state.range(0)), 0);
  const MollifierKernel kernel(kSpec);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::self_pair_sum(p.values, kernel));
  state.SetComplexityN(state.range(0));
}

void BM_CrossPairSerial(benchmark::State& state) {
  const auto a = bench_path(static_cast<int>(state.range(0)), 1);
  const auto b = bench_path(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cross_pair_sum_serial(a.values, b.values, kSpec));
  state.SetComplexityN(state.range(0));
}

void BM_CrossPairTiled(benchmark::State& state) {
  const auto a = bench_path(static_cast<int>(state.range(0)), 1);
  const auto b = bench_path(static_cast<int>(state.range(0)), 2);
  const MollifierKernel kernel(kSpec);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cross_pair_sum(a.values, b.values, kernel));
  state.SetComplexityN(state.range(0));
}

void BM_SampleCholesky(benchmark::State& state) {
  const TimeGrid grid(1.0, static_cast<int>(state.range(0)));
  cholesky_factor(grid, 0.75);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_cholesky(grid, 0.75, 2, RngStream(3, i++)));
}

void BM_SampleCirculant(benchmark::State& state) {
  const TimeGrid grid(1.0, static_cast<int>(state.range(0)));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_circulant(grid, 0.75, 2, RngStream(3, i++)));
}

BENCHMARK(BM_SelfPairSerial)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_SelfPairTiled)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_CrossPairSerial)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_CrossPairTiled)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_SampleCholesky)->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_SampleCirculant)->RangeMultiplier(4)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();
