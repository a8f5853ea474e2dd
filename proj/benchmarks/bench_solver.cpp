// Fast eigen-decomposition solve against the dense Kronecker reference, and assembly cost.
//
//   fpde_bench --benchmark_filter=Fast1D

#include "fpde/manufactured.hpp"
#include "fpde/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

fpde::AssembledSystem system_for(int dim, int n)
{
    const fpde::ProblemSpec spec = fpde::ProblemSpec::uniform(dim, 0.6, 0.5, 1.5, 1.0, 0.0, 1.0, 0.0);
    const fpde::ManufacturedCase c = fpde::test_case("IV", dim);
    return fpde::assemble(spec, n, std::vector<int>(dim, n), fpde::force_separable(c, spec));
}

void fast(benchmark::State& state, int dim, fpde::TemporalSolver mode)
{
    const int n = static_cast<int>(state.range(0));
    const fpde::AssembledSystem sys = system_for(dim, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(fpde::fast_solve(sys, mode).U_hat.data().data());
    state.SetComplexityN(n);
}

void BM_Fast1D(benchmark::State& s) { fast(s, 1, fpde::TemporalSolver::schur); }
void BM_Fast1DEigen(benchmark::State& s) { fast(s, 1, fpde::TemporalSolver::eigen); }
void BM_Fast2D(benchmark::State& s) { fast(s, 2, fpde::TemporalSolver::schur); }
void BM_Fast3D(benchmark::State& s) { fast(s, 3, fpde::TemporalSolver::schur); }

void BM_Direct1D(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const fpde::AssembledSystem sys = system_for(1, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(fpde::direct_solve_oracle(sys).U_hat.data().data());
    state.SetComplexityN(n);
}

void BM_Direct2D(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const fpde::AssembledSystem sys = system_for(2, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(fpde::direct_solve_oracle(sys).U_hat.data().data());
    state.SetComplexityN(n);
}

void BM_Assemble2D(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(system_for(2, n).F.data().data());
    state.SetComplexityN(n);
}

} // namespace

BENCHMARK(BM_Fast1D)->RangeMultiplier(2)->Range(8, 64)->Complexity(benchmark::oAuto);
BENCHMARK(BM_Fast1DEigen)->DenseRange(6, 12, 2);
BENCHMARK(BM_Direct1D)->RangeMultiplier(2)->Range(8, 32)->Complexity(benchmark::oAuto);
BENCHMARK(BM_Fast2D)->Arg(5)->Arg(7)->Arg(9)->Arg(15)->Complexity(benchmark::oAuto);
BENCHMARK(BM_Direct2D)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fast3D)->Arg(5)->Arg(7)->Arg(9)->Arg(15)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Assemble2D)->Arg(5)->Arg(9)->Arg(15)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
