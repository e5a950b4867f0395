// Serial reference vs OpenMP kernels on a (G_a, Delta_a) grid
// and on the Wigner grid.

#include "gauge_squeeze/model.hpp"
#include "gauge_squeeze/observables.hpp"
#include "gauge_squeeze/sweep.hpp"

#include <benchmark/benchmark.h>

using namespace gauge_squeeze;

namespace {

SweepSpec grid_spec(std::size_t n) {
  SweepSpec spec;
  spec.base.hopping = 0.1;
  spec.base.mechanical_mean_field_re = mean_field_for_shift(5.625, spec.base.duffing);
  spec.axis1 = {"G_a", 0.0, 0.2, n};
  spec.axis2 = Axis{"Delta_a", 2.0, 5.0, n};
  return spec;
}

void BM_SweepSerial(benchmark::State& state) {
  const SweepSpec spec = grid_spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(run_sweep_serial(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
  const SweepSpec spec = grid_spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(run_sweep(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_WignerSerial(benchmark::State& state) {
  const Mat2 v{{0.18, 0.02}, {0.02, 2.2}};
  const auto axis = default_wigner_axis(v, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(wigner_grid_serial(v, axis, axis));
}

void BM_WignerParallel(benchmark::State& state) {
  const Mat2 v{{0.18, 0.02}, {0.02, 2.2}};
  const auto axis = default_wigner_axis(v, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(wigner_grid(v, axis, axis));
}

} // namespace

BENCHMARK(BM_SweepSerial)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WignerSerial)->Arg(201)->Arg(801)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WignerParallel)->Arg(201)->Arg(801)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
