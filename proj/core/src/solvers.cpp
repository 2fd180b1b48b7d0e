#include "pkrylov/solvers.hpp"

#include <cmath>

namespace pkrylov {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::cg: return "cg";
        case Method::bicgstab: return "bicgstab";
        case Method::gmres: return "gmres";
    }
    return "?";
}

std::string_view to_string(Variant v) noexcept {
    return v == Variant::classical ? "classical" : "pipelined";
}

std::string_view to_string(Termination t) noexcept {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iterations: return "max_iterations";
        case Termination::breakdown: return "breakdown";
        case Termination::lucky_breakdown: return "lucky_breakdown";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view s) noexcept {
    if (s == "cg") return Method::cg;
    if (s == "bicgstab") return Method::bicgstab;
    if (s == "gmres") return Method::gmres;
    return std::nullopt;
}

std::optional<Variant> parse_variant(std::string_view s) noexcept {
    if (s == "classical") return Variant::classical;
    if (s == "pipelined") return Variant::pipelined;
    return std::nullopt;
}

void SolverConfig::validate() const {
    if (!(tolerance > 0.0)) throw PreconditionError("solver config: tolerance must be > 0");
    if (restart == 0) throw PreconditionError("solver config: restart must be >= 1");
    if (max_iterations == 0) throw PreconditionError("solver config: max_iterations must be >= 1");
    if (fixed_iterations && *fixed_iterations == 0) {
        throw PreconditionError("solver config: fixed iteration count must be >= 1");
    }
    if (!(breakdown_tolerance >= 0.0)) {
        throw PreconditionError("solver config: breakdown tolerance must be >= 0");
    }
}

SolverResult solve(Method method, Variant variant, MatrixView a, const DenseVector& b,
                   const DenseVector& x0, const SolverConfig& cfg, const LaunchConfig& launch) {
    const bool piped = variant == Variant::pipelined;
    switch (method) {
        case Method::cg:
            return piped ? cg_pipelined(a, b, x0, cfg, launch) : cg_classical(a, b, x0, cfg, launch);
        case Method::bicgstab:
            return piped ? bicgstab_pipelined(a, b, x0, cfg, launch)
                         : bicgstab_classical(a, b, x0, cfg, launch);
        case Method::gmres:
            return piped ? gmres_pipelined(a, b, x0, cfg, launch)
                         : gmres_classical(a, b, x0, cfg, launch);
    }
    throw PreconditionError("solve: unknown method");
}

}  // namespace pkrylov
