#include <benchmark/benchmark.h>

#include "pkrylov/generators.hpp"
#include "pkrylov/solvers.hpp"

namespace pkrylov {
namespace {

// Thirty fixed iterations per run, as in the published protocol. The
// per-iteration time is reported as a counter.
void BM_solver(benchmark::State& state, Method m, Variant v) {
    const auto sys = gen_poisson2d(static_cast<int>(state.range(0)));
    SolverConfig cfg;
    cfg.fixed_iterations = 30;
    double loop = 0.0;
    std::size_t iters = 0;
    for (auto _ : state) {
        auto r = solve(m, v, sys.matrix, sys.rhs, {}, cfg);
        loop += r.loop_seconds;
        iters += r.iterations;
        benchmark::DoNotOptimize(r.x);
    }
    state.counters["us_per_iter"] = iters ? 1e6 * loop / static_cast<double>(iters) : 0.0;
    state.counters["n"] = static_cast<double>(sys.matrix.rows());
}

BENCHMARK_CAPTURE(BM_solver, cg_classical, Method::cg, Variant::classical)->DenseRange(1, 5);
BENCHMARK_CAPTURE(BM_solver, cg_pipelined, Method::cg, Variant::pipelined)->DenseRange(1, 5);
BENCHMARK_CAPTURE(BM_solver, bicgstab_classical, Method::bicgstab, Variant::classical)->DenseRange(1, 5);
BENCHMARK_CAPTURE(BM_solver, bicgstab_pipelined, Method::bicgstab, Variant::pipelined)->DenseRange(1, 5);
BENCHMARK_CAPTURE(BM_solver, gmres_classical, Method::gmres, Variant::classical)->DenseRange(1, 5);
BENCHMARK_CAPTURE(BM_solver, gmres_pipelined, Method::gmres, Variant::pipelined)->DenseRange(1, 5);

}  // namespace
}  // namespace pkrylov

BENCHMARK_MAIN();
