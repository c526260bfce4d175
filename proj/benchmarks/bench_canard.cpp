#include <benchmark/benchmark.h>

#include "painleve/canard.hpp"

using namespace painleve;

static void BM_Shoot(benchmark::State& st) {
  const ModelParams prm{3.0, 1.6, 1.0};
  const double eps = st.range(0) == 0 ? 1e-2 : st.range(0) == 1 ? 3e-3 : 1e-3;
  for (auto _ : st) benchmark::DoNotOptimize(canard::shoot(prm, eps).phi_star);
}
BENCHMARK(BM_Shoot)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_EntryPoint(benchmark::State& st) {
  const ModelParams prm{3.0, 1.6, 1.0};
  for (auto _ : st) benchmark::DoNotOptimize(canard::attracting_entry_point(prm, 1e-3, 1.0).seed_phi);
}
BENCHMARK(BM_EntryPoint)->Unit(benchmark::kMillisecond);
