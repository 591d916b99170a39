#include <benchmark/benchmark.h>

#include <allee/orbits.hpp>
#include <allee/presets.hpp>
#include <allee/regime.hpp>

namespace {

allee::ModelSystem model(double p) {
  allee::presets::PredatorPreyTable t;
  t.p = p;
  return allee::presets::predator_prey(t);
}

void BM_BoundaryMultipliers(benchmark::State& state) {
  const auto m = model(1.3);
  for (auto _ : state) benchmark::DoNotOptimize(allee::compute_boundary_multipliers(m));
}
BENCHMARK(BM_BoundaryMultipliers)->Unit(benchmark::kMillisecond);

void BM_NewtonStableOrbit(benchmark::State& state) {
  const auto m = model(1.3);
  const allee::State seed = allee::poincare_map(m, {0.2, 0.1}, 100);
  for (auto _ : state) benchmark::DoNotOptimize(allee::find_orbit_newton(m, seed, 1));
}
BENCHMARK(BM_NewtonStableOrbit)->Unit(benchmark::kMillisecond);

void BM_GridSearch(benchmark::State& state) {
  const auto m = model(1.3);
  allee::GridSearchOptions g;
  g.nx = g.ny = static_cast<int>(state.range(0));
  g.jobs = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(allee::grid_search(m, g));
}
BENCHMARK(BM_GridSearch)->Args({6, 1})->Args({6, 0})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SweepFirstThreshold(benchmark::State& state) {
  const auto m = model(1.0);
  allee::SweepOptions o;
  o.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(allee::sweep_parameter(m, "p.mean", 0.5, 2.0, 16, o));
  }
}
BENCHMARK(BM_SweepFirstThreshold)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
