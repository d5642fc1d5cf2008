/// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "pauli_sep/catalog.hpp"
#include "pauli_sep/separation.hpp"

using namespace pauli_sep;

namespace {

struct ResidualFixture {
    separation::Scenario scenario = catalog::proposition_example(1.0, 1.0, 0.3, 0.2, 0.1);
    separation::SeparatedSolution solution;
    separation::PauliProblem problem;
    std::vector<separation::GridPoint> points;

    ResidualFixture() : solution(init()), problem(separation::scenario_problem(solution)) {
        points = separation::scenario_points(scenario);
    }

    separation::SeparatedSolution init() {
        scenario.grid.points = {8, 8, 8};
        scenario.grid.times = {0.0, 0.3, 0.6};
        return separation::solve(scenario);
    }
};

ResidualFixture& residual_fixture() {
    static ResidualFixture f;
    return f;
}

struct MaxwellFixture {
    catalog::CatalogParams params;
    fields::ElectromagneticPotential potential;
    GridSpec grid;

    MaxwellFixture() {
        params.k = 0.8;
        params.a1 = 0.7;
        params.a2 = -0.4;
        params.a3 = 0.3;
        potential = catalog::catalog_potential(catalog::CatalogCase::S5, params);
        grid = catalog::catalog_default_grid(catalog::CatalogCase::S5, params);
    }
};

MaxwellFixture& maxwell_fixture() {
    static MaxwellFixture f;
    return f;
}

void BM_PauliResidualSerial(benchmark::State& state) {
    auto& f = residual_fixture();
    for (auto _ : state) benchmark::DoNotOptimize(separation::pauli_residual_serial(f.problem, f.points));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.points.size()));
}

void BM_PauliResidualParallel(benchmark::State& state) {
    auto& f = residual_fixture();
    for (auto _ : state) benchmark::DoNotOptimize(separation::pauli_residual(f.problem, f.points));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.points.size()));
}

void BM_MaxwellSerial(benchmark::State& state) {
    auto& f = maxwell_fixture();
    for (auto _ : state) benchmark::DoNotOptimize(fields::maxwell_residual_serial(f.potential, f.grid));
}

void BM_MaxwellParallel(benchmark::State& state) {
    auto& f = maxwell_fixture();
    for (auto _ : state) benchmark::DoNotOptimize(fields::maxwell_residual(f.potential, f.grid));
}

}  // namespace

BENCHMARK(BM_PauliResidualSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PauliResidualParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaxwellSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaxwellParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
