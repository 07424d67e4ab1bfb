// Serial reference vs OpenMP row-parallel energy/gradient evaluation.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "linepack/energy.hpp"
#include "linepack/optimizer.hpp"

namespace {

using linepack::KernelSpec;

const KernelSpec kKernel = KernelSpec::projective_riesz(2.5);

void BM_Serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const linepack::Frame x = linepack::random_uniform_frame(6, n, 1);
  for (auto _ : state) {
    auto ev = linepack::serial::evaluate(kKernel, x.matrix(), true);
    benchmark::DoNotOptimize(ev.energy);
  }
  state.SetItemsProcessed(state.iterations() * n * (n - 1));
}

void BM_Parallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(threads);
  const linepack::Frame x = linepack::random_uniform_frame(6, n, 1);
  for (auto _ : state) {
    auto ev = linepack::evaluate(kKernel, x.matrix(), true);
    benchmark::DoNotOptimize(ev.energy);
  }
  omp_set_num_threads(saved);
  state.SetItemsProcessed(state.iterations() * n * (n - 1));
}

void BM_Multistart(benchmark::State& state) {
  linepack::OptimizerSettings st;
  st.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = linepack::multistart(kKernel, 3, 12, st);
    benchmark::DoNotOptimize(r.report.energy);
  }
}

}  // namespace

BENCHMARK(BM_Serial)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Parallel)
    ->ArgsProduct({{16, 64, 256, 1024}, {1, 2, 4}})
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Multistart)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
