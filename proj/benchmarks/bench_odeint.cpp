#include <benchmark/benchmark.h>

#include <cmath>

#include "painleve/compliant.hpp"
#include "painleve/odeint.hpp"

using namespace painleve;

// harmonic oscillator over ten periods, adaptive
static void BM_IntegrateOscillator(benchmark::State& st) {
  ode::IntegratorConfig cfg;
  cfg.rtol = std::pow(10.0, -static_cast<double>(st.range(0)));
  cfg.atol = cfg.rtol * 1e-2;
  cfg.dense = false;
  for (auto _ : st) {
    auto tr = ode::integrate<2>([](double, const ode::State<2>& y) { return ode::State<2>{y[1], -y[0]}; },
                                {1.0, 0.0}, 0.0, 20.0 * 3.141592653589793, cfg);
    benchmark::DoNotOptimize(tr.final_state());
  }
}
BENCHMARK(BM_IntegrateOscillator)->Arg(6)->Arg(9)->Arg(12);

// compliant slow-fast field at eps = 1e-3 over a short slow interval
static void BM_CompliantFlow(benchmark::State& st) {
  const ModelParams prm{3.0, 1.6, 1.0};
  const double eps = 1e-3;
  const double theta = 0.5, phi = 1.0;
  const double g = critical_manifold_point(theta, phi, prm);
  ode::IntegratorConfig cfg;
  cfg.dense = false;
  for (auto _ : st) {
    auto tr = ode::integrate<4>([&](double, const ScaledVec& y) { return slowfast_vf(from_vec(y), prm, eps); },
                                {g, 0.0, theta, phi}, 0.0, 50.0, cfg);
    benchmark::DoNotOptimize(tr.final_state());
  }
}
BENCHMARK(BM_CompliantFlow);
