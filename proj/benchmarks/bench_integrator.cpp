#include <benchmark/benchmark.h>

#include <allee/integrator.hpp>
#include <allee/presets.hpp>

namespace {

allee::ModelSystem model(double p) {
  allee::presets::PredatorPreyTable t;
  t.p = p;
  return allee::presets::predator_prey(t);
}

void BM_FlowOnePeriod(benchmark::State& state) {
  const auto m = model(1.3);
  allee::IntegratorSettings s;
  s.rel_tol = state.range(0) == 0 ? 1e-9 : 1e-11;
  s.abs_tol = state.range(0) == 0 ? 1e-12 : 1e-16;
  for (auto _ : state) {
    benchmark::DoNotOptimize(allee::flow(m, 0.0, {0.2, 0.1}, m.period, s));
  }
}
BENCHMARK(BM_FlowOnePeriod)->Arg(0)->Arg(1);

void BM_VariationalOnePeriod(benchmark::State& state) {
  const auto m = model(1.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(allee::integrate_variational(m, 0.0, {0.6, 0.05}, m.period));
  }
}
BENCHMARK(BM_VariationalOnePeriod);

void BM_SampledTrajectory(benchmark::State& state) {
  const auto m = model(1.3);
  const auto periods = static_cast<double>(state.range(0));
  const auto times = allee::sample_grid(0.0, periods * m.period, state.range(0) * 73);
  for (auto _ : state) {
    benchmark::DoNotOptimize(allee::integrate(m, 0.0, {0.2, 0.1}, periods * m.period, {}, times));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampledTrajectory)->Arg(50)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace
