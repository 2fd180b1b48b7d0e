#include <algorithm>
#include <cmath>

#include "pkrylov/blas.hpp"
#include "pkrylov/fused.hpp"
#include "pkrylov/reduction.hpp"
#include "pkrylov/solvers.hpp"
#include "solver_common.hpp"

namespace pkrylov {

SolverResult bicgstab_classical(MatrixView a, const DenseVector& b, const DenseVector& x0,
                                const SolverConfig& cfg, const LaunchConfig& launch) {
    detail::Run run(a, b, x0, cfg, launch);
    const auto& ctx = run.ctx();
    auto& x = run.x();
    const auto n = b.size();

    ctx.begin(Phase::setup);
    run.measure_rhs();
    auto r = residual(a, b, x, ctx);
    DenseVector r0star(n);
    DenseVector p(n);
    copy(r, r0star, ctx);
    copy(r, p, ctx);
    double r_r0 = dot(r, r0star, ctx);  // equals <r0, r0> since r0* = r0

    if (run.converged(std::sqrt(r_r0) / run.scale())) {
        run.result().termination = Termination::converged;
        return run.finish();
    }

    DenseVector s(n);
    run.start_clock();
    for (std::size_t it = 0; it < run.limit(); ++it) {
        ctx.begin(Phase::iteration);
        const auto ap = spmv(a, p, ctx);
        const double ap_r0 = dot(ap, r0star, ctx);
        if (run.below_breakdown(ap_r0)) {
            run.set_breakdown(BreakdownKind::ap_r0star);
            break;
        }
        const double alpha = r_r0 / ap_r0;
        copy(r, s, ctx);
        axpy(-alpha, ap, s, ctx);

        const auto as = spmv(a, s, ctx);
        const double as_s = dot(as, s, ctx);
        const double as_as = dot(as, as, ctx);
        if (run.below_breakdown(as_as)) {
            // s vanished together with As: x + alpha p already solves the system.
            const double rel = run.monitor(norm2(s, ctx));
            if (run.converged(rel)) {
                axpy(alpha, p, x, ctx);
                run.result().termination = Termination::converged;
            } else {
                run.set_breakdown(BreakdownKind::as_as);
            }
            break;
        }
        const double omega = as_s / as_as;

        axpy(alpha, p, x, ctx);
        axpy(omega, s, x, ctx);
        copy(s, r, ctx);
        axpy(-omega, as, r, ctx);

        const double rel = run.monitor(norm2(r, ctx));
        if (!std::isfinite(rel)) {
            run.set_breakdown(BreakdownKind::nonfinite);
            break;
        }
        if (run.converged(rel)) {
            run.result().termination = Termination::converged;
            break;
        }

        const double r_r0_new = dot(r, r0star, ctx);
        if (run.below_breakdown(r_r0_new)) {
            run.set_breakdown(BreakdownKind::r_r0star);
            break;
        }
        if (run.below_breakdown(omega)) {
            run.set_breakdown(BreakdownKind::omega);
            break;
        }
        const double beta = (r_r0_new / r_r0) * (alpha / omega);
        axpy(-omega, ap, p, ctx);
        xpay(r, beta, p, ctx);
        r_r0 = r_r0_new;
    }
    run.stop_clock();
    return run.finish();
}

SolverResult bicgstab_pipelined(MatrixView a, const DenseVector& b, const DenseVector& x0,
                                const SolverConfig& cfg, const LaunchConfig& launch) {
    detail::Run run(a, b, x0, cfg, launch);
    const auto& ctx = run.ctx();
    auto& x = run.x();
    auto& diag = run.result().diagnostics;
    const auto n = b.size();

    ctx.begin(Phase::setup);
    run.measure_rhs();
    auto r = residual(a, b, x, ctx);
    DenseVector r0star(n);
    DenseVector p(n);
    copy(r, r0star, ctx);
    copy(r, p, ctx);
    auto r_r0_partials = dot_stage1(r, r0star, ctx);
    const double r0_norm2 = reduce_stage2(r_r0_partials, ctx).front();

    if (run.converged(std::sqrt(r0_norm2) / run.scale())) {
        run.result().termination = Termination::converged;
        return run.finish();
    }

    const FusedReductionRequest ap_terms{FusedTerm::vector(r0star)};
    const FusedReductionRequest as_terms{FusedTerm::input(), FusedTerm::result(),
                                         FusedTerm::vector(r0star)};
    const double r0star_norm = std::sqrt(r0_norm2);

    run.start_clock();
    for (std::size_t it = 0; it < run.limit(); ++it) {
        ctx.begin(Phase::iteration);

        auto f_ap = spmv_fused(a, p, ap_terms, ctx);
        SUpdateResult su;
        try {
            su = fused_bicgstab_s_update(r, f_ap.q, r_r0_partials, f_ap.partials, ctx,
                                         cfg.breakdown_tolerance);
        } catch (const BreakdownError& e) {
            run.set_breakdown(e.kind());
            break;
        }
        auto f_as = spmv_fused(a, su.s, as_terms, ctx);
        const auto sums =
            reduce_stage2_packed({&r_r0_partials, &f_ap.partials, &su.s_s, &f_as.partials}, ctx);
        const double r_r0 = sums[0];
        const double ap_r0 = sums[1];
        const double s_s = sums[2];
        const double as_s = sums[3];
        const double as_as = sums[4];
        const double as_r0 = sums[5];
        const double alpha = r_r0 / ap_r0;  // bit-identical to su.alpha

        if (run.below_breakdown(as_as)) {
            const double rel = run.monitor(std::sqrt(s_s));
            if (run.converged(rel)) {
                axpy(alpha, p, x, ctx);
                run.result().termination = Termination::converged;
            } else {
                run.set_breakdown(BreakdownKind::as_as);
            }
            break;
        }
        const double omega = as_s / as_as;
        const double beta = -as_r0 / ap_r0;
        double rr = s_s - 2.0 * omega * as_s + omega * omega * as_as;
        const bool clamped = rr < 0.0;
        rr = std::max(rr, 0.0);

        if (cfg.debug_checks) {
            const auto quiet = ctx.untraced();
            const double s_norm = norm2(su.s, quiet);
            const double denom = s_norm * r0star_norm;
            diag.bicgstab_s_r0star.push_back(
                denom > 0.0 ? std::abs(dot(su.s, r0star, quiet)) / denom : 0.0);
            diag.bicgstab_rr_identity.push_back(rr);
        }

        r_r0_partials = fused_bicgstab_xrp_update(x, r, p, su.s, f_ap.q, f_as.q, alpha, omega,
                                                  beta, r0star, ctx);

        if (cfg.debug_checks) diag.bicgstab_rr_direct.push_back(dot(r, r, ctx.untraced()));

        double monitored = std::sqrt(rr);
        if (clamped) {
            // Cancellation drove the identity negative; fall back to the truth once.
            ctx.begin(Phase::epilogue);
            monitored = norm2(residual(a, b, x, ctx), ctx);
        }
        const double rel = run.monitor(monitored);
        if (!std::isfinite(rel)) {
            run.set_breakdown(BreakdownKind::nonfinite);
            break;
        }
        if (run.converged(rel)) {
            run.result().termination = Termination::converged;
            break;
        }
    }
    run.stop_clock();
    return run.finish();
}

}  // namespace pkrylov
