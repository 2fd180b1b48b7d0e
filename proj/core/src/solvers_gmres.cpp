// Restarted simpler GMRES.
//
// Each cycle starts from r = (b - A x) / rho0 and builds an orthonormal basis
// v_1..v_k of A [r, v_1, ..., v_{k-1}] = [v_1, ..., v_k] R with R upper
// triangular. With xi_i = <r, v_i>, the minimal-residual correction is
//   x += rho0 (eta_1 r + sum_{i=2..k} eta_i v_{i-1}),   R eta = xi.
//
// The classical form overwrites r with r - xi_i v_i after every step, so at
// the end of the cycle only the updated residual is left. Substituting
// r_start = r_end + sum_j xi_j v_j gives the coefficients used there:
//   eta_1 on r_end and eta_{j+1} + eta_1 xi_j on v_j for j = 1..k,
// where eta_{k+1} = 0 (the last basis vector only appears through r).

#include <algorithm>
#include <cmath>
#include <vector>

#include "pkrylov/blas.hpp"
#include "pkrylov/fused.hpp"
#include "pkrylov/gram_schmidt.hpp"
#include "pkrylov/reduction.hpp"
#include "pkrylov/solvers.hpp"
#include "solver_common.hpp"

namespace pkrylov {

namespace {

double max_off_diagonal(std::span<const DenseVector> basis, const DenseVector& v,
                        const ExecContext& quiet) {
    double worst = 0.0;
    for (const auto& u : basis) worst = std::max(worst, std::abs(dot(u, v, quiet)));
    return worst;
}

/// 1 - sum_{i<=k} xi_i^2 after each step, the squared relative residual of
/// the cycle. Cancellation can drive it to zero or below; the estimate is
/// then exhausted and the true residual has to be recomputed.
std::vector<double> remaining_fractions(std::span<const double> xi) {
    std::vector<double> out;
    double rest = 1.0;
    for (const double v : xi) {
        rest -= v * v;
        out.push_back(rest);
    }
    return out;
}

/// Starts a cycle: r = (b - A x) / rho0. Returns rho0.
double start_cycle(MatrixView a, const DenseVector& b, const DenseVector& x, DenseVector& r,
                   const ExecContext& ctx) {
    r = residual(a, b, x, ctx);
    const double rho0 = norm2(r, ctx);
    if (rho0 > 0.0) scal_inverse(rho0, r, ctx);
    return rho0;
}

}  // namespace

SolverResult gmres_classical(MatrixView a, const DenseVector& b, const DenseVector& x0,
                             const SolverConfig& cfg, const LaunchConfig& launch) {
    detail::Run run(a, b, x0, cfg, launch);
    const auto& ctx = run.ctx();
    auto& x = run.x();
    auto& diag = run.result().diagnostics;
    const auto m = cfg.restart;

    ctx.begin(Phase::setup);
    run.measure_rhs();
    DenseVector r;
    double rho0 = start_cycle(a, b, x, r, ctx);
    if (run.converged(rho0 / run.scale())) {
        run.result().termination = Termination::converged;
        return run.finish();
    }

    std::vector<DenseVector> basis;
    basis.reserve(m);
    UpperTriangular rfac(m);
    std::vector<double> xi;
    std::size_t steps = 0;
    bool done = false;

    run.start_clock();
    while (!done) {
        basis.clear();
        rfac.clear();
        xi.clear();
        double rest = 1.0;
        bool lucky = false;
        bool exhausted = false;

        for (std::size_t i = 0; i < m && steps < run.limit(); ++i) {
            ctx.begin(Phase::iteration);
            ++steps;
            auto v = spmv(a, i == 0 ? r : basis.back(), ctx);
            const auto coeffs = cfg.orthogonalization == Orthogonalization::modified_gs
                                    ? orthogonalize_mgs(basis, v, ctx)
                                    : orthogonalize_cgs(basis, v, ctx);
            const double norm = norm2(v, ctx);
            for (std::size_t j = 0; j < coeffs.size(); ++j) rfac(j, i) = coeffs[j];
            rfac(i, i) = norm;
            if (run.below_breakdown(norm)) {
                lucky = true;
                break;
            }
            scal_inverse(norm, v, ctx);
            if (cfg.debug_checks) {
                diag.gmres_orthogonality.push_back(max_off_diagonal(basis, v, ctx.untraced()));
            }
            const double xi_i = dot(r, v, ctx);
            axpy(-xi_i, v, r, ctx);
            basis.push_back(std::move(v));
            xi.push_back(xi_i);

            rest -= xi_i * xi_i;
            if (!(rest > 0.0) && std::isfinite(rest)) {
                exhausted = true;
                break;
            }
            const double rel = run.monitor(rho0 * std::sqrt(rest));
            if (!std::isfinite(rel)) {
                run.set_breakdown(BreakdownKind::nonfinite);
                done = true;
                break;
            }
            if (run.converged(rel)) {
                run.result().termination = Termination::converged;
                done = true;
                break;
            }
        }

        ctx.begin(Phase::epilogue);
        const auto k = xi.size();
        if (k == 0) {
            if (lucky) run.set_breakdown(BreakdownKind::singular_triangular);
            break;
        }
        if (run.result().termination == Termination::breakdown) break;
        DenseVector eta;
        try {
            eta = solve_upper_triangular(rfac, xi);
        } catch (const BreakdownError& e) {
            run.set_breakdown(e.kind());
            break;
        }
        std::vector<double> coeffs{rho0 * eta[0]};
        std::vector<const DenseVector*> vecs{&r};
        for (std::size_t j = 0; j < k; ++j) {
            const double next = j + 1 < k ? eta[j + 1] : 0.0;
            coeffs.push_back(rho0 * (next + eta[0] * xi[j]));
            vecs.push_back(&basis[j]);
        }
        multi_axpy(coeffs, vecs, x, ctx);

        if (lucky && run.result().termination != Termination::converged) {
            run.result().termination = Termination::lucky_breakdown;
            done = true;
        }
        if (done) break;
        if (exhausted || steps < run.limit()) rho0 = start_cycle(a, b, x, r, ctx);
        if (exhausted && run.converged(run.monitor(rho0))) {
            run.result().termination = Termination::converged;
            break;
        }
        if (steps >= run.limit()) break;
        if (!exhausted && run.converged(rho0 / run.scale())) {
            run.result().termination = Termination::converged;
            break;
        }
    }
    run.stop_clock();
    return run.finish();
}

SolverResult gmres_pipelined(MatrixView a, const DenseVector& b, const DenseVector& x0,
                             const SolverConfig& cfg, const LaunchConfig& launch) {
    if (cfg.orthogonalization != Orthogonalization::classical_gs) {
        throw PreconditionError("gmres_pipelined: the fused Gram-Schmidt process is classical");
    }
    detail::Run run(a, b, x0, cfg, launch);
    const auto& ctx = run.ctx();
    auto& x = run.x();
    auto& diag = run.result().diagnostics;
    const auto m = cfg.restart;
    const FusedReductionRequest first_terms{FusedTerm::result()};
    const FusedReductionRequest later_terms{FusedTerm::input()};

    ctx.begin(Phase::setup);
    run.measure_rhs();
    DenseVector r;
    double rho0 = start_cycle(a, b, x, r, ctx);
    if (run.converged(rho0 / run.scale())) {
        run.result().termination = Termination::converged;
        return run.finish();
    }

    std::vector<DenseVector> basis;
    basis.reserve(m);
    UpperTriangular rfac(m);
    std::size_t steps = 0;

    run.start_clock();
    for (;;) {
        basis.clear();
        rfac.clear();
        WorkgroupPartials xi_partials;
        bool lucky = false;

        // The Gram-Schmidt process needs no host round trip, so the cycle runs
        // to completion; a vanished norm is flagged on the device and ends it.
        for (std::size_t i = 0; i < m && steps < run.limit(); ++i) {
            ctx.begin(Phase::iteration);
            ++steps;
            WorkgroupPartials v_v;
            DenseVector v;
            if (i == 0) {
                auto f = spmv_fused(a, r, first_terms, ctx);
                v = std::move(f.q);
                v_v = std::move(f.partials);
            } else {
                auto f = spmv_fused(a, basis.back(), later_terms, ctx);
                v = std::move(f.q);
                const auto older = std::span<const DenseVector>(basis).first(i - 1);
                auto partials = fused_gs_stage1(older, v, ctx);
                append_partials(partials, f.partials);
                auto up = fused_gs_update(v, basis, partials, ctx);
                for (std::size_t j = 0; j < up.coefficients.size(); ++j) {
                    rfac(j, i) = up.coefficients[j];
                }
                v_v = std::move(up.v_v);
            }
            auto nz = fused_gs_normalize(v, v_v, r, ctx, cfg.breakdown_tolerance);
            rfac(i, i) = nz.norm;
            if (nz.breakdown) {
                lucky = true;
                break;
            }
            if (cfg.debug_checks) {
                diag.gmres_orthogonality.push_back(max_off_diagonal(basis, v, ctx.untraced()));
            }
            basis.push_back(std::move(v));
            append_partials(xi_partials, nz.r_v);
        }

        ctx.begin(Phase::epilogue);
        auto k = basis.size();
        if (k == 0) {
            if (lucky) run.set_breakdown(BreakdownKind::singular_triangular);
            break;
        }
        // One transfer: the xi partials together with the k x k factor.
        auto xi = reduce_stage2(xi_partials, ExecContext(ctx.config()));
        ctx.transfer(xi_partials.bytes() + 8ULL * k * (k + 1) / 2);

        const auto fractions = remaining_fractions(xi);
        bool converged = false;
        bool exhausted = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (!(fractions[i] > 0.0) && std::isfinite(fractions[i])) {
                exhausted = true;
                k = i + 1;
                break;
            }
            const double rel = run.monitor(rho0 * std::sqrt(fractions[i]));
            if (!std::isfinite(rel)) {
                run.set_breakdown(BreakdownKind::nonfinite);
                break;
            }
            if (run.converged(rel)) {
                converged = true;
                k = i + 1;
                break;
            }
        }
        if (run.result().termination == Termination::breakdown) break;
        xi.resize(k);

        DenseVector eta;
        try {
            eta = solve_upper_triangular(rfac, xi);
        } catch (const BreakdownError& e) {
            run.set_breakdown(e.kind());
            break;
        }
        ctx.transfer(8ULL * k);
        std::vector<double> coeffs{rho0 * eta[0]};
        std::vector<const DenseVector*> vecs{&r};
        for (std::size_t j = 1; j < k; ++j) {
            coeffs.push_back(rho0 * eta[j]);
            vecs.push_back(&basis[j - 1]);
        }
        multi_axpy(coeffs, vecs, x, ctx);

        if (converged) {
            run.result().termination = Termination::converged;
            break;
        }
        if (lucky && !exhausted) {
            run.result().termination = Termination::lucky_breakdown;
            break;
        }
        if (exhausted || steps < run.limit()) rho0 = start_cycle(a, b, x, r, ctx);
        if (exhausted && run.converged(run.monitor(rho0))) {
            run.result().termination = Termination::converged;
            break;
        }
        if (steps >= run.limit()) break;
        if (!exhausted && run.converged(rho0 / run.scale())) {
            run.result().termination = Termination::converged;
            break;
        }
    }
    run.stop_clock();
    return run.finish();
}

}  // namespace pkrylov
