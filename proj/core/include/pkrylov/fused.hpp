#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pkrylov/reduction.hpp"
#include "pkrylov/sparse.hpp"
#include "pkrylov/trace.hpp"
#include "pkrylov/vector.hpp"

namespace pkrylov {

/// Divisors below this magnitude are treated as breakdown.
inline constexpr double default_breakdown_tolerance = 1e-30;

/// One inner product accumulated while an SpMV produces q = A p.
struct FusedTerm {
    enum class Kind { with_input, with_result, with_vector };

    Kind kind;
    const DenseVector* w = nullptr;

    static FusedTerm input() noexcept { return {Kind::with_input}; }    // <q, p>
    static FusedTerm result() noexcept { return {Kind::with_result}; }  // <q, q>
    static FusedTerm vector(const DenseVector& w) noexcept { return {Kind::with_vector, &w}; }
};

/// Inner products to accumulate alongside an SpMV; at most four.
class FusedReductionRequest {
public:
    static constexpr std::size_t max_terms = 4;

    FusedReductionRequest() = default;
    /// Throws PreconditionError beyond max_terms.
    FusedReductionRequest(std::initializer_list<FusedTerm> terms);

    std::span<const FusedTerm> terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

private:
    std::vector<FusedTerm> terms_;
};

struct FusedSpmvResult {
    DenseVector q;
    WorkgroupPartials partials;  // one quantity per requested term, in order
};

/// q = A p with stage-one partials of the requested inner products taken from
/// each q[i] as it is produced. q is bit-identical to spmv. One launch.
FusedSpmvResult spmv_fused(MatrixView a, const DenseVector& p, const FusedReductionRequest& req,
                           const ExecContext& ctx = {});

/// Pipelined CG vector update, one launch:
///   x <- x + alpha p,  r <- r - alpha Ap,  p <- r + beta p_old
/// Each p[i] is read once, the updated r[i] is reused from the register for p
/// and for the stage-one partials of <r, r>, which are returned.
WorkgroupPartials fused_cg_vector_update(DenseVector& x, DenseVector& r, DenseVector& p,
                                         const DenseVector& ap, double alpha, double beta,
                                         const ExecContext& ctx = {});

struct SUpdateResult {
    DenseVector s;
    WorkgroupPartials s_s;  // stage-one partials of <s, s>
    double alpha;           // the value every workgroup finalized
};

/// BiCGStab s-update, one launch. Every workgroup finalizes
/// alpha = <r, r0*> / <Ap, r0*> from the partials with sum_partials, then
/// s = r - alpha Ap. Throws BreakdownError when |<Ap, r0*>| < breakdown_tol.
SUpdateResult fused_bicgstab_s_update(const DenseVector& r, const DenseVector& ap,
                                      const WorkgroupPartials& r_r0star,
                                      const WorkgroupPartials& ap_r0star,
                                      const ExecContext& ctx = {},
                                      double breakdown_tol = default_breakdown_tolerance);

/// BiCGStab closing update, one launch:
///   x <- x + alpha p + omega s,  r <- s - omega As,  p <- r + beta (p - omega Ap)
/// Returns stage-one partials of <r_new, r0*>.
WorkgroupPartials fused_bicgstab_xrp_update(DenseVector& x, DenseVector& r, DenseVector& p,
                                            const DenseVector& s, const DenseVector& ap,
                                            const DenseVector& as, double alpha, double omega,
                                            double beta, const DenseVector& r0star,
                                            const ExecContext& ctx = {});

/// Stage-one partials of <basis[j], v> for every j in a single launch.
WorkgroupPartials fused_gs_stage1(std::span<const DenseVector> basis, const DenseVector& v,
                                  const ExecContext& ctx = {});

struct GsUpdateResult {
    std::vector<double> coefficients;  // finalized <basis[j], v>
    WorkgroupPartials v_v;             // stage-one partials of <v, v> after the update
};

/// Classical Gram-Schmidt update, one launch. Finalizes every coefficient
/// from `partials` (quantity j belongs to basis[j]), subtracts all
/// projections from v in one pass and emits partials of the new <v, v>.
GsUpdateResult fused_gs_update(DenseVector& v, std::span<const DenseVector> basis,
                               const WorkgroupPartials& partials, const ExecContext& ctx = {});

struct GsNormalizeResult {
    double norm;                  // ||v|| before scaling
    bool breakdown;               // norm < breakdown_tol; v left unscaled
    WorkgroupPartials r_v;        // stage-one partials of <r, v> after scaling
};

/// Finalizes ||v|| from its partials, scales v to unit length and emits the
/// partials of <r, v>, all in one launch.
GsNormalizeResult fused_gs_normalize(DenseVector& v, const WorkgroupPartials& v_v,
                                     const DenseVector& r, const ExecContext& ctx = {},
                                     double breakdown_tol = default_breakdown_tolerance);

/// Appends every quantity of `from` to `into`. Models kernels writing into a
/// shared partial-result buffer, so nothing is recorded.
void append_partials(WorkgroupPartials& into, const WorkgroupPartials& from);

}  // namespace pkrylov
