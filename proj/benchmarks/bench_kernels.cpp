#include <benchmark/benchmark.h>

#include "pkrylov/blas.hpp"
#include "pkrylov/fused.hpp"
#include "pkrylov/generators.hpp"
#include "pkrylov/reduction.hpp"

namespace pkrylov {
namespace {

CsrMatrix& poisson(int level) {
    static std::vector<CsrMatrix> cache(7);
    if (cache[level].rows() == 0) cache[level] = gen_poisson2d(level).matrix;
    return cache[level];
}

void BM_spmv_csr(benchmark::State& state) {
    const auto& a = poisson(static_cast<int>(state.range(0)));
    const DenseVector p(a.cols(), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(spmv_csr(a, p));
    state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(spmv_bytes(a)));
}

void BM_spmv_ell(benchmark::State& state) {
    const auto a = csr_to_ell(poisson(static_cast<int>(state.range(0))));
    const DenseVector p(a.cols(), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(spmv_ell(a, p));
    state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(spmv_bytes(a)));
}

void BM_dot(benchmark::State& state) {
    const DenseVector x(state.range(0), 1.5), y(state.range(0), 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(dot(x, y));
}

// The pipelined CG vector update against the three axpy-style kernels plus
// the separate <r, r> reduction it replaces.
void BM_cg_update_fused(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    DenseVector x(n, 0.0), r(n, 1.0), p(n, 1.0);
    const DenseVector ap(n, 1e-9);
    for (auto _ : state) {
        auto part = fused_cg_vector_update(x, r, p, ap, 1e-3, 0.5);
        benchmark::DoNotOptimize(reduce_stage2(part, {}));
    }
}

void BM_cg_update_unfused(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    DenseVector x(n, 0.0), r(n, 1.0), p(n, 1.0);
    const DenseVector ap(n, 1e-9);
    for (auto _ : state) {
        axpy(1e-3, p, x);
        axpy(-1e-3, ap, r);
        xpay(r, 0.5, p);
        benchmark::DoNotOptimize(dot(r, r));
    }
}

void BM_spmv_fused_two_dots(benchmark::State& state) {
    const auto& a = poisson(static_cast<int>(state.range(0)));
    const DenseVector p(a.cols(), 1.0);
    const FusedReductionRequest req{FusedTerm::result(), FusedTerm::input()};
    for (auto _ : state) {
        auto f = spmv_fused(a, p, req);
        benchmark::DoNotOptimize(reduce_stage2(f.partials, {}));
    }
}

void BM_spmv_then_two_dots(benchmark::State& state) {
    const auto& a = poisson(static_cast<int>(state.range(0)));
    const DenseVector p(a.cols(), 1.0);
    for (auto _ : state) {
        const auto q = spmv_csr(a, p);
        benchmark::DoNotOptimize(dot(q, q));
        benchmark::DoNotOptimize(dot(q, p));
    }
}

void BM_gs_fused(benchmark::State& state) {
    const std::size_t n = 65025, k = static_cast<std::size_t>(state.range(0));
    std::vector<DenseVector> basis(k, DenseVector(n, 1.0 / 255));
    for (auto _ : state) {
        DenseVector v(n, 1.0);
        auto up = fused_gs_update(v, basis, fused_gs_stage1(basis, v));
        benchmark::DoNotOptimize(up.coefficients);
    }
}

BENCHMARK(BM_spmv_csr)->DenseRange(1, 6);
BENCHMARK(BM_spmv_ell)->DenseRange(1, 6);
BENCHMARK(BM_dot)->RangeMultiplier(8)->Range(1 << 8, 1 << 20);
BENCHMARK(BM_cg_update_fused)->RangeMultiplier(8)->Range(1 << 8, 1 << 20);
BENCHMARK(BM_cg_update_unfused)->RangeMultiplier(8)->Range(1 << 8, 1 << 20);
BENCHMARK(BM_spmv_fused_two_dots)->DenseRange(1, 6);
BENCHMARK(BM_spmv_then_two_dots)->DenseRange(1, 6);
BENCHMARK(BM_gs_fused)->Arg(1)->Arg(10)->Arg(30);

}  // namespace
}  // namespace pkrylov

BENCHMARK_MAIN();
