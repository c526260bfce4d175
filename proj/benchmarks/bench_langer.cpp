#include <benchmark/benchmark.h>

#include <vector>

#include "painleve/langer.hpp"

using namespace painleve::langer;

static void BM_LangerEval(benchmark::State& st) {
  const double th = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(langer_eval(0.5, th));
}
BENCHMARK(BM_LangerEval)->Arg(-8)->Arg(0)->Arg(5);

static void BM_LangerGrid(benchmark::State& st) {
  std::vector<double> th(201);
  for (int i = 0; i < 201; ++i) th[i] = -10.0 + 0.1 * i;
  for (auto _ : st) benchmark::DoNotOptimize(langer_grid(0.5, th));
}
BENCHMARK(BM_LangerGrid)->Unit(benchmark::kMillisecond);

static void BM_LaDirect(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(la_direct(0.5, -5.0));
}
BENCHMARK(BM_LaDirect);
