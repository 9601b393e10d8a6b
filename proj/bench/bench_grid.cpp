// Serial reference vs OpenMP for the time-grid kernels.

#include <benchmark/benchmark.h>

#include "commonbath/grid.hpp"

using namespace commonbath;

namespace {

Scenario scenario(double n, int steps)
{
    Scenario s;
    s.model = SpectralModel{n, 0.05};
    s.geom = Geometry{1.0};
    s.theta = 0.05;
    s.initial = make_initial_state(InitialState::UpUp);
    s.time_grid = grid::uniform_times(60.0, steps);
    return s;
}

grid::Execution mode(const benchmark::State& state)
{
    return state.range(1) == 0 ? grid::Execution::Serial : grid::Execution::Parallel;
}

void BM_EvolveSeries(benchmark::State& state)
{
    const Scenario s = scenario(1.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid::evolve_series(s, {}, mode(state)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(s.time_grid.size()));
}

void BM_ConcurrenceSeries(benchmark::State& state)
{
    const Scenario s = scenario(1.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid::concurrence_series(s, {}, mode(state)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(s.time_grid.size()));
}

// fractional n goes through quadrature, the expensive path
void BM_EvolveSeriesQuadrature(benchmark::State& state)
{
    const Scenario s = scenario(1.5, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid::evolve_series(s, {}, mode(state)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(s.time_grid.size()));
}

} // namespace

BENCHMARK(BM_EvolveSeries)->ArgsProduct({{600, 4800}, {0, 1}})->ArgNames({"steps", "parallel"});
BENCHMARK(BM_ConcurrenceSeries)->ArgsProduct({{600, 4800}, {0, 1}})->ArgNames({"steps", "parallel"});
BENCHMARK(BM_EvolveSeriesQuadrature)->ArgsProduct({{12}, {0, 1}})->ArgNames({"steps", "parallel"});
BENCHMARK_MAIN();
