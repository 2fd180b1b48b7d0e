#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pkrylov/errors.hpp"
#include "pkrylov/sparse.hpp"
#include "pkrylov/trace.hpp"
#include "pkrylov/vector.hpp"

namespace pkrylov {

enum class Method { cg, bicgstab, gmres };
enum class Variant { classical, pipelined };
enum class Orthogonalization { classical_gs, modified_gs };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(Variant v) noexcept;
std::optional<Method> parse_method(std::string_view s) noexcept;
std::optional<Variant> parse_variant(std::string_view s) noexcept;

struct SolverConfig {
    double tolerance = 1e-8;            // on ||r|| / ||b||; absolute when b = 0
    std::size_t max_iterations = 500;
    std::size_t restart = 30;           // GMRES(m)
    Orthogonalization orthogonalization = Orthogonalization::classical_gs;
    double breakdown_tolerance = 1e-30;
    /// Run exactly this many iterations and ignore the convergence test.
    /// Exact zero residuals and breakdowns still end the run.
    std::optional<std::size_t> fixed_iterations;
    /// Record the recurrence checks in SolverResult::diagnostics. The checks
    /// run untraced and never change the iterates.
    bool debug_checks = false;

    /// Throws PreconditionError on tolerance <= 0, restart == 0 or
    /// max_iterations == 0.
    void validate() const;
};

enum class Termination { converged, max_iterations, breakdown, lucky_breakdown };

std::string_view to_string(Termination t) noexcept;

/// Debug-only measurements, filled when SolverConfig::debug_checks is set.
struct Diagnostics {
    // Pipelined CG: beta from the Ap-based recurrence and the ratio of the
    // directly reduced <r, r> of consecutive iterations.
    std::vector<double> cg_beta_recurrence;
    std::vector<double> cg_beta_direct;
    // Pipelined BiCGStab, per iteration.
    std::vector<double> bicgstab_s_r0star;       // |<s, r0*>| / (||s|| ||r0*||)
    std::vector<double> bicgstab_rr_identity;    // <s,s> - 2w<s,As> + w^2<As,As>
    std::vector<double> bicgstab_rr_direct;      // <r_new, r_new>
    // GMRES, per step: max_j |<v_j, v_i>| after normalization.
    std::vector<double> gmres_orthogonality;
};

struct SolverResult {
    DenseVector x;
    /// Monitored residual after each iteration, relative to ||b||.
    std::vector<double> residual_history;
    /// ||b - A x|| recomputed once at exit (absolute).
    double true_final_residual = 0.0;
    double rhs_norm = 0.0;
    std::size_t iterations = 0;
    Termination termination = Termination::max_iterations;
    std::optional<BreakdownKind> breakdown;
    ExecutionTrace trace;
    /// Wall time of the iteration loop only.
    double loop_seconds = 0.0;
    Diagnostics diagnostics;
};

/// Textbook CG with one BLAS-style launch per vector operation: SpMV, two
/// inner products (each a launch plus a transfer) and three vector updates.
SolverResult cg_classical(MatrixView a, const DenseVector& b, const DenseVector& x0,
                          const SolverConfig& cfg, const LaunchConfig& launch = {});

/// CG with all vector updates in one fused kernel and the SpMV fused with
/// <Ap, Ap> and <p, Ap>. beta comes from
///   beta_i = alpha_i^2 <Ap_i, Ap_i> / <r_i, r_i> - 1
/// so every iteration is two launches and one transfer.
SolverResult cg_pipelined(MatrixView a, const DenseVector& b, const DenseVector& x0,
                          const SolverConfig& cfg, const LaunchConfig& launch = {});

/// BiCGStab with r0* = r0 and unfused kernels; the residual norm is an
/// explicit inner product each iteration.
SolverResult bicgstab_classical(MatrixView a, const DenseVector& b, const DenseVector& x0,
                                const SolverConfig& cfg, const LaunchConfig& launch = {});

/// BiCGStab in four launches and one transfer per iteration, with
/// beta_i = -<As_i, r0*> / <Ap_i, r0*> and the residual norm from
/// <s,s> - 2 omega <s,As> + omega^2 <As,As>.
SolverResult bicgstab_pipelined(MatrixView a, const DenseVector& b, const DenseVector& x0,
                                const SolverConfig& cfg, const LaunchConfig& launch = {});

/// Restarted simpler GMRES with the residual updated after every step.
SolverResult gmres_classical(MatrixView a, const DenseVector& b, const DenseVector& x0,
                             const SolverConfig& cfg, const LaunchConfig& launch = {});

/// Restarted simpler GMRES without the per-step residual update, so the
/// whole Gram-Schmidt process runs on fused kernels with no transfers.
SolverResult gmres_pipelined(MatrixView a, const DenseVector& b, const DenseVector& x0,
                             const SolverConfig& cfg, const LaunchConfig& launch = {});

SolverResult solve(Method method, Variant variant, MatrixView a, const DenseVector& b,
                   const DenseVector& x0, const SolverConfig& cfg, const LaunchConfig& launch = {});

}  // namespace pkrylov
