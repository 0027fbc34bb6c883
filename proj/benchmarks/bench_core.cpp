#include <benchmark/benchmark.h>

#include <numbers>

#include "conedelta/bracket.hpp"
#include "conedelta/discretize.hpp"
#include "conedelta/eigensolve.hpp"
#include "conedelta/profiles.hpp"
#include "conedelta/trial.hpp"
#include "conedelta/weyl.hpp"

using namespace conedelta;
using std::numbers::pi;

static void BM_mu_neumann_delta(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(bracket::mu_neumann_delta(1.0, 10.0).mu);
}
BENCHMARK(BM_mu_neumann_delta);

static void BM_compute_sn(benchmark::State& state) {
    const ConeModel m(1.0, pi / 8);
    const auto chi1 = profiles::make_hardy_poly(1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(trial::compute_sn(static_cast<std::uint64_t>(state.range(0)),
                                                   m, chi1)
                                     .s_n_scaled);
}
BENCHMARK(BM_compute_sn)->Arg(64)->Arg(256);

static void BM_weyl_defect(benchmark::State& state) {
    const ConeModel m(1.0, pi / 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            weyl::weyl_defect(static_cast<std::uint64_t>(state.range(0)), 0.5, m).defect);
}
BENCHMARK(BM_weyl_defect)->Arg(8)->Arg(32);

static void BM_assemble(benchmark::State& state) {
    const ConeModel m(1.0, pi / 4);
    const double rmax = static_cast<double>(state.range(0));
    const fem::Grid g = fem::build_grid(m, rmax, rmax, 0.25);
    const auto gen = fem::Generatrix::straight_ray(m.theta);
    for (auto _ : state)
        benchmark::DoNotOptimize(fem::assemble(g, m, gen).A.nonZeros());
    state.SetComplexityN(g.ndof);
}
BENCHMARK(BM_assemble)->Arg(6)->Arg(12)->Arg(24)->Complexity();

static void BM_lowest_eigs(benchmark::State& state) {
    const ConeModel m(1.0, pi / 4);
    const fem::Grid g = fem::build_grid(m, 12.0, 12.0, 0.25);
    const fem::Pencil p = fem::assemble(g, m, fem::Generatrix::straight_ray(m.theta));
    for (auto _ : state)
        benchmark::DoNotOptimize(eig::lowest_eigs(p, 4).eigenvalues[0]);
}
BENCHMARK(BM_lowest_eigs);

static void BM_count_below(benchmark::State& state) {
    const ConeModel m(1.0, pi / 4);
    const fem::Grid g = fem::build_grid(m, 24.0, 24.0, 0.25);
    const fem::Pencil p = fem::assemble(g, m, fem::Generatrix::straight_ray(m.theta));
    for (auto _ : state)
        benchmark::DoNotOptimize(eig::count_below(p, -0.25));
}
BENCHMARK(BM_count_below);

BENCHMARK_MAIN();
