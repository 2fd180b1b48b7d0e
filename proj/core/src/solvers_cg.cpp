#include <cmath>

#include "pkrylov/blas.hpp"
#include "pkrylov/fused.hpp"
#include "pkrylov/reduction.hpp"
#include "pkrylov/solvers.hpp"
#include "solver_common.hpp"

namespace pkrylov {

SolverResult cg_classical(MatrixView a, const DenseVector& b, const DenseVector& x0,
                          const SolverConfig& cfg, const LaunchConfig& launch) {
    detail::Run run(a, b, x0, cfg, launch);
    const auto& ctx = run.ctx();
    auto& x = run.x();

    ctx.begin(Phase::setup);
    run.measure_rhs();
    auto r = residual(a, b, x, ctx);
    DenseVector p(r.size());
    copy(r, p, ctx);
    double rr = dot(r, r, ctx);

    if (run.converged(std::sqrt(rr) / run.scale())) {
        run.result().termination = Termination::converged;
        return run.finish();
    }

    run.start_clock();
    for (std::size_t it = 0; it < run.limit(); ++it) {
        ctx.begin(Phase::iteration);
        const auto ap = spmv(a, p, ctx);
        const double p_ap = dot(p, ap, ctx);
        if (run.below_breakdown(p_ap)) {
            run.set_breakdown(BreakdownKind::p_ap);
            break;
        }
        const double alpha = rr / p_ap;
        axpy(alpha, p, x, ctx);
        axpy(-alpha, ap, r, ctx);
        const double rr_new = dot(r, r, ctx);

        const double rel = run.monitor(std::sqrt(rr_new));
        if (!std::isfinite(rel)) {
            run.set_breakdown(BreakdownKind::nonfinite);
            break;
        }
        if (run.converged(rel)) {
            run.result().termination = Termination::converged;
            break;
        }
        const double beta = rr_new / rr;
        xpay(r, beta, p, ctx);
        rr = rr_new;
    }
    run.stop_clock();
    return run.finish();
}

SolverResult cg_pipelined(MatrixView a, const DenseVector& b, const DenseVector& x0,
                          const SolverConfig& cfg, const LaunchConfig& launch) {
    detail::Run run(a, b, x0, cfg, launch);
    const auto& ctx = run.ctx();
    auto& x = run.x();
    auto& diag = run.result().diagnostics;
    const FusedReductionRequest products{FusedTerm::input(), FusedTerm::result()};

    ctx.begin(Phase::setup);
    run.measure_rhs();
    auto r = residual(a, b, x, ctx);
    DenseVector p(r.size());
    copy(r, p, ctx);
    auto rr_partials = dot_stage1(r, r, ctx);
    auto fused = spmv_fused(a, p, products, ctx);
    auto ap = std::move(fused.q);
    auto sums = reduce_stage2_packed({&rr_partials, &fused.partials}, ctx);
    double rr = sums[0];

    if (run.converged(std::sqrt(rr) / run.scale())) {
        run.result().termination = Termination::converged;
        return run.finish();
    }
    if (run.below_breakdown(sums[1])) {
        run.set_breakdown(BreakdownKind::p_ap);
        return run.finish();
    }
    double alpha = rr / sums[1];
    double beta = alpha * alpha * sums[2] / rr - 1.0;
    if (cfg.debug_checks) diag.cg_beta_recurrence.push_back(beta);

    run.start_clock();
    for (std::size_t it = 0; it < run.limit(); ++it) {
        ctx.begin(Phase::iteration);
        rr_partials = fused_cg_vector_update(x, r, p, ap, alpha, beta, ctx);
        fused = spmv_fused(a, p, products, ctx);
        ap = std::move(fused.q);
        sums = reduce_stage2_packed({&rr_partials, &fused.partials}, ctx);
        const double rr_new = sums[0];
        const double p_ap = sums[1];
        const double ap_ap = sums[2];

        if (cfg.debug_checks) diag.cg_beta_direct.push_back(rr_new / rr);
        const double rel = run.monitor(std::sqrt(rr_new));
        if (!std::isfinite(rel)) {
            run.set_breakdown(BreakdownKind::nonfinite);
            break;
        }
        if (run.converged(rel)) {
            run.result().termination = Termination::converged;
            break;
        }
        if (run.below_breakdown(p_ap)) {
            run.set_breakdown(BreakdownKind::p_ap);
            break;
        }
        rr = rr_new;
        alpha = rr / p_ap;
        beta = alpha * alpha * ap_ap / rr - 1.0;
        if (cfg.debug_checks) diag.cg_beta_recurrence.push_back(beta);
    }
    run.stop_clock();
    return run.finish();
}

}  // namespace pkrylov
