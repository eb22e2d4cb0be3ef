// Serial reference vs OpenMP kernels on the hot loops.
// Run: ./bench/fstar_bench [--benchmark_filter=...]

#include "fstar/convex.hpp"
#include "fstar/harmonic.hpp"
#include "fstar/prekopa.hpp"
#include "fstar/verify.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace fstar;

namespace {

GridFn legendre_input(int n) {
    GridFn f({Axis{-3.0, 3.0, n}, Axis{-3.0, 3.0, n}});
    for (std::int64_t k = 0; k < f.size(); ++k) {
        std::vector<double> y = f.coords(f.multi_index(k));
        f[k] = std::abs(y[0]) + 0.5 * y[1] * y[1] + 0.2 * y[0] * y[1];
    }
    return f;
}

GridFn marginal_input(int nx, int ny) {
    std::vector<Axis> joint = {Axis{-1.0, 1.0, nx}, Axis{-1.0, 1.0, nx}, Axis{-6.0, 6.0, ny}};
    GridFn g(joint);
    g.set_split(2);
    for (std::int64_t f = 0; f < g.size(); ++f) {
        std::vector<double> z = g.coords(g.multi_index(f));
        g[f] = z[2] * z[2] + 0.5 * z[0] * z[2] + z[0] * z[0] + z[1] * z[1];
    }
    return g;
}

void bench_legendre(benchmark::State &state, Exec policy) {
    GridFn f = legendre_input(static_cast<int>(state.range(0)));
    std::vector<Axis> dual = {Axis{-4.0, 4.0, static_cast<int>(state.range(0))},
                              Axis{-4.0, 4.0, static_cast<int>(state.range(0))}};
    for (auto _ : state) {
        LegendreResult r = legendre(f, dual, policy);
        benchmark::DoNotOptimize(r.fn.values().data());
    }
}

void bench_marginal(benchmark::State &state, Exec policy) {
    GridFn psi = marginal_input(static_cast<int>(state.range(0)), 513);
    for (auto _ : state) {
        MarginalResult r = marginal(psi, nullptr, policy);
        benchmark::DoNotOptimize(r.phi.values().data());
    }
}

void bench_supconv(benchmark::State &state, Exec policy) {
    GridFn f({Axis{-4.0, 4.0, static_cast<int>(state.range(0))}, Axis{-4.0, 4.0, static_cast<int>(state.range(0))}});
    for (std::int64_t k = 0; k < f.size(); ++k) {
        std::vector<double> y = f.coords(f.multi_index(k));
        f[k] = std::abs(y[0] - 0.2) + std::abs(y[1]);
    }
    for (auto _ : state) {
        GridFn r = sup_convolution(f, 0.05, policy);
        benchmark::DoNotOptimize(r.values().data());
    }
}

void bench_sor(benchmark::State &state, Exec policy) {
    Domain disk = Domain::disk({0.0, 0.0}, 1.0, 128);
    std::vector<double> g(128);
    for (int i = 0; i < 128; ++i) g[static_cast<size_t>(i)] = std::cos(2.0 * disk.boundary_angle(i));
    SolveOptions so;
    so.grid_count = static_cast<int>(state.range(0));
    so.policy = policy;
    for (auto _ : state) {
        GridFn u = solve_dirichlet(disk, g, so);
        benchmark::DoNotOptimize(u.values().data());
    }
}

void bench_product_check(benchmark::State &state, Exec policy) {
    GridFn psi = marginal_input(static_cast<int>(state.range(0)), 65);
    GammaSamples gs;
    for (auto _ : state) {
        CheckReport r = is_product_subharmonic(psi, DirichletSet::trace_cone(2), gs, 1e-6, policy);
        benchmark::DoNotOptimize(r.worst_margin);
    }
}

} // namespace

BENCHMARK_CAPTURE(bench_legendre, serial, Exec::Serial)->Arg(257)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_legendre, openmp, Exec::OpenMP)->Arg(257)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_marginal, serial, Exec::Serial)->Arg(41)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_marginal, openmp, Exec::OpenMP)->Arg(41)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_supconv, serial, Exec::Serial)->Arg(513)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_supconv, openmp, Exec::OpenMP)->Arg(513)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_sor, serial, Exec::Serial)->Arg(129)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_sor, openmp, Exec::OpenMP)->Arg(129)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_product_check, serial, Exec::Serial)->Arg(17)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_product_check, openmp, Exec::OpenMP)->Arg(17)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
