#include "pkrylov/fused.hpp"

#include <cmath>
#include <string>

#include "pkrylov/errors.hpp"

namespace pkrylov {

namespace {

void require_len(const DenseVector& v, std::size_t n, const char* op) {
    if (v.size() != n) {
        throw ShapeError(std::string(op) + ": expected length " + std::to_string(n) + ", got " +
                         std::to_string(v.size()));
    }
}

}  // namespace

const char* to_string(BreakdownKind kind) noexcept {
    switch (kind) {
        case BreakdownKind::p_ap: return "<p,Ap> vanished";
        case BreakdownKind::ap_r0star: return "<Ap,r0*> vanished";
        case BreakdownKind::as_as: return "<As,As> vanished";
        case BreakdownKind::omega: return "omega vanished";
        case BreakdownKind::r_r0star: return "<r,r0*> vanished";
        case BreakdownKind::singular_triangular: return "singular triangular factor";
        case BreakdownKind::nonfinite: return "non-finite value";
    }
    return "unknown";
}

FusedReductionRequest::FusedReductionRequest(std::initializer_list<FusedTerm> terms)
    : terms_(terms) {
    if (terms_.size() > max_terms) {
        throw PreconditionError("fused spmv: at most 4 inner products per launch");
    }
    for (const auto& t : terms_) {
        if (t.kind == FusedTerm::Kind::with_vector && t.w == nullptr) {
            throw PreconditionError("fused spmv: vector term without a vector");
        }
    }
}

FusedSpmvResult spmv_fused(MatrixView a, const DenseVector& p, const FusedReductionRequest& req,
                           const ExecContext& ctx) {
    if (a.cols() != p.size()) throw ShapeError("spmv_fused: matrix and vector do not match");
    const auto terms = req.terms();
    for (const auto& t : terms) {
        if (t.kind == FusedTerm::Kind::with_input && a.rows() != a.cols()) {
            throw ShapeError("spmv_fused: <q, p> needs a square matrix");
        }
        if (t.kind == FusedTerm::Kind::with_vector) require_len(*t.w, a.rows(), "spmv_fused");
    }

    FusedSpmvResult out{DenseVector(a.rows()), {}};
    Stage1Accumulator acc(ctx.config(), a.rows(), terms.size());
    std::uint64_t extra_reads = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double qi = 0.0;
        a.visit_row(i, [&](double v, index_t c) { qi += v * p[c]; });
        out.q[i] = qi;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            switch (terms[k].kind) {
                case FusedTerm::Kind::with_input: acc.add(i, k, qi * p[i]); break;
                case FusedTerm::Kind::with_result: acc.add(i, k, qi * qi); break;
                case FusedTerm::Kind::with_vector: acc.add(i, k, qi * (*terms[k].w)[i]); break;
            }
        }
    }
    for (const auto& t : terms) extra_reads += t.kind == FusedTerm::Kind::with_result ? 0 : 1;
    out.partials = acc.finish();
    ctx.launch(spmv_bytes(a) + 8ULL * extra_reads * a.rows() + out.partials.bytes());
    return out;
}

WorkgroupPartials fused_cg_vector_update(DenseVector& x, DenseVector& r, DenseVector& p,
                                         const DenseVector& ap, double alpha, double beta,
                                         const ExecContext& ctx) {
    const auto n = x.size();
    require_len(r, n, "fused_cg_vector_update");
    require_len(p, n, "fused_cg_vector_update");
    require_len(ap, n, "fused_cg_vector_update");

    Stage1Accumulator acc(ctx.config(), n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double p_old = p[i];
        x[i] += alpha * p_old;
        const double r_new = r[i] - alpha * ap[i];
        r[i] = r_new;
        p[i] = r_new + beta * p_old;
        acc.add(i, 0, r_new * r_new);
    }
    auto partials = acc.finish();
    // reads x, r, p, Ap; writes x, r, p
    ctx.launch(56ULL * n + partials.bytes());
    return partials;
}

SUpdateResult fused_bicgstab_s_update(const DenseVector& r, const DenseVector& ap,
                                      const WorkgroupPartials& r_r0star,
                                      const WorkgroupPartials& ap_r0star, const ExecContext& ctx,
                                      double breakdown_tol) {
    const auto n = r.size();
    require_len(ap, n, "fused_bicgstab_s_update");

    // Every workgroup sums the same partials in the same order.
    const double denom = sum_partials(ap_r0star);
    if (!(std::abs(denom) >= breakdown_tol)) throw BreakdownError(BreakdownKind::ap_r0star);
    const double alpha = sum_partials(r_r0star) / denom;

    SUpdateResult out{DenseVector(n), {}, alpha};
    Stage1Accumulator acc(ctx.config(), n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double si = r[i] - alpha * ap[i];
        out.s[i] = si;
        acc.add(i, 0, si * si);
    }
    out.s_s = acc.finish();
    ctx.launch(24ULL * n + r_r0star.bytes() + ap_r0star.bytes() + out.s_s.bytes());
    return out;
}

WorkgroupPartials fused_bicgstab_xrp_update(DenseVector& x, DenseVector& r, DenseVector& p,
                                            const DenseVector& s, const DenseVector& ap,
                                            const DenseVector& as, double alpha, double omega,
                                            double beta, const DenseVector& r0star,
                                            const ExecContext& ctx) {
    const auto n = x.size();
    const std::initializer_list<const DenseVector*> operands{&r, &p, &s, &ap, &as, &r0star};
    for (const auto* v : operands) {
        require_len(*v, n, "fused_bicgstab_xrp_update");
    }

    Stage1Accumulator acc(ctx.config(), n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = p[i];
        const double si = s[i];
        x[i] = x[i] + alpha * pi + omega * si;
        const double r_new = si - omega * as[i];
        r[i] = r_new;
        p[i] = r_new + beta * (pi - omega * ap[i]);
        acc.add(i, 0, r_new * r0star[i]);
    }
    auto partials = acc.finish();
    // reads x, p, s, Ap, As, r0*; writes x, r, p
    ctx.launch(72ULL * n + partials.bytes());
    return partials;
}

WorkgroupPartials fused_gs_stage1(std::span<const DenseVector> basis, const DenseVector& v,
                                  const ExecContext& ctx) {
    const auto n = v.size();
    for (const auto& b : basis) require_len(b, n, "fused_gs_stage1");

    Stage1Accumulator acc(ctx.config(), n, basis.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = v[i];
        for (std::size_t j = 0; j < basis.size(); ++j) acc.add(i, j, basis[j][i] * vi);
    }
    auto partials = acc.finish();
    ctx.launch(8ULL * n * (basis.size() + 1) + partials.bytes());
    return partials;
}

GsUpdateResult fused_gs_update(DenseVector& v, std::span<const DenseVector> basis,
                               const WorkgroupPartials& partials, const ExecContext& ctx) {
    const auto n = v.size();
    for (const auto& b : basis) require_len(b, n, "fused_gs_update");
    if (partials.quantities() != basis.size()) {
        throw ShapeError("fused_gs_update: one partial quantity per basis vector required");
    }

    GsUpdateResult out;
    out.coefficients.reserve(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        out.coefficients.push_back(sum_partials(partials, j));
    }

    Stage1Accumulator acc(ctx.config(), n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        double vi = v[i];
        for (std::size_t j = 0; j < basis.size(); ++j) vi -= out.coefficients[j] * basis[j][i];
        v[i] = vi;
        acc.add(i, 0, vi * vi);
    }
    out.v_v = acc.finish();
    ctx.launch(8ULL * n * (basis.size() + 2) + partials.bytes() + out.v_v.bytes());
    return out;
}

GsNormalizeResult fused_gs_normalize(DenseVector& v, const WorkgroupPartials& v_v,
                                     const DenseVector& r, const ExecContext& ctx,
                                     double breakdown_tol) {
    const auto n = v.size();
    require_len(r, n, "fused_gs_normalize");

    GsNormalizeResult out{std::sqrt(sum_partials(v_v)), false, {}};
    out.breakdown = !(out.norm >= breakdown_tol);
    Stage1Accumulator acc(ctx.config(), n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = out.breakdown ? v[i] : v[i] / out.norm;
        v[i] = vi;
        acc.add(i, 0, r[i] * vi);
    }
    out.r_v = acc.finish();
    ctx.launch(24ULL * n + v_v.bytes() + out.r_v.bytes());
    return out;
}

void append_partials(WorkgroupPartials& into, const WorkgroupPartials& from) {
    into.append(from);
}

}  // namespace pkrylov
