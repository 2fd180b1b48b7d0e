#pragma once

// Shared scaffolding for the solver drivers.

#include <chrono>
#include <cmath>

#include "pkrylov/blas.hpp"
#include "pkrylov/reduction.hpp"
#include "pkrylov/solvers.hpp"

namespace pkrylov::detail {

/// Owns the trace and timing of one solver run.
class Run {
public:
    Run(MatrixView a, const DenseVector& b, const DenseVector& x0, const SolverConfig& cfg,
        const LaunchConfig& launch)
        : a_(a), b_(b), cfg_(cfg) {
        cfg.validate();
        if (a.rows() != a.cols()) throw ShapeError("solver: matrix must be square");
        if (b.size() != a.rows()) throw ShapeError("solver: rhs length does not match matrix");
        if (!x0.empty() && x0.size() != a.cols()) {
            throw ShapeError("solver: initial guess length does not match matrix");
        }
        result_.x = x0.empty() ? DenseVector(a.cols()) : x0;
        ctx_ = ExecContext(launch, &result_.trace);
        limit_ = cfg.fixed_iterations.value_or(cfg.max_iterations);
    }

    const ExecContext& ctx() const noexcept { return ctx_; }
    SolverResult& result() noexcept { return result_; }
    DenseVector& x() noexcept { return result_.x; }
    const SolverConfig& cfg() const noexcept { return cfg_; }
    std::size_t limit() const noexcept { return limit_; }
    bool fixed() const noexcept { return cfg_.fixed_iterations.has_value(); }

    /// ||b|| in the setup record. Zero right-hand sides switch to an absolute
    /// criterion.
    void measure_rhs() {
        result_.rhs_norm = norm2(b_, ctx_);
        scale_ = result_.rhs_norm > 0.0 ? result_.rhs_norm : 1.0;
    }
    double scale() const noexcept { return scale_; }

    /// Appends a monitored residual (absolute) and returns its relative value.
    double monitor(double abs_residual) {
        const double rel = abs_residual / scale_;
        result_.residual_history.push_back(rel);
        result_.iterations = result_.residual_history.size();
        return rel;
    }

    /// True when the convergence exit applies to `rel`. An exact zero always
    /// ends the run, fixed-iteration mode or not.
    bool converged(double rel) const noexcept {
        return rel == 0.0 || (!fixed() && rel <= cfg_.tolerance);
    }

    bool below_breakdown(double d) const noexcept {
        return !(std::abs(d) >= cfg_.breakdown_tolerance);
    }

    void start_clock() { t0_ = std::chrono::steady_clock::now(); }
    void stop_clock() {
        result_.loop_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

    void set_breakdown(BreakdownKind kind) {
        result_.termination = Termination::breakdown;
        result_.breakdown = kind;
    }

    /// Recomputes ||b - A x|| in an epilogue record and returns the result.
    SolverResult finish() {
        ctx_.begin(Phase::epilogue);
        const auto r = residual(a_, b_, result_.x, ctx_);
        result_.true_final_residual = norm2(r, ctx_);
        if (result_.trace.is_open()) result_.trace.end();
        if (!std::isfinite(result_.true_final_residual) &&
            result_.termination != Termination::breakdown) {
            set_breakdown(BreakdownKind::nonfinite);
        }
        return std::move(result_);
    }

    /// Untraced ||b - A x||, used by checks that must not touch the counters.
    double quiet_true_residual() const {
        const auto quiet = ctx_.untraced();
        return norm2(residual(a_, b_, result_.x, quiet), quiet);
    }

private:
    MatrixView a_;
    const DenseVector& b_;
    SolverConfig cfg_;
    SolverResult result_;
    ExecContext ctx_;
    std::size_t limit_ = 0;
    double scale_ = 1.0;
    std::chrono::steady_clock::time_point t0_{};
};

}  // namespace pkrylov::detail
