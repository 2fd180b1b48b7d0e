#pragma once

#include <string>
#include <vector>

#include "pkrylov/cost_model.hpp"
#include "pkrylov/solvers.hpp"
#include "pkrylov/sparse.hpp"

namespace pkrylov {

/// Average counts per solver iteration, taken over iteration records from
/// the second onward (the first alone when there is only one).
struct IterationSummary {
    double launches = 0.0;
    double transfers = 0.0;
    double bytes_kernel = 0.0;
    double bytes_transfer = 0.0;
    std::size_t iterations = 0;
};

IterationSummary summarize_iterations(const ExecutionTrace& trace);

/// Mean predicted time of the iterations in `trace` under `profile`.
double predicted_time_per_iteration(const ExecutionTrace& trace, const DeviceProfile& profile);

struct SpeedupCase {
    std::string label;
    const CsrMatrix* matrix;
    const DenseVector* rhs;
};

struct SpeedupRow {
    std::string label;
    std::size_t n = 0;
    std::size_t nnz = 0;
    double classical_seconds = 0.0;
    double pipelined_seconds = 0.0;
    double ratio = 0.0;  // classical / pipelined
};

/// Runs the classical and pipelined variant of `method` on every case under
/// tracing and evaluates the cost model on the recorded iterations.
std::vector<SpeedupRow> speedup_curve(Method method, const std::vector<SpeedupCase>& cases,
                                      const DeviceProfile& profile, const SolverConfig& cfg,
                                      const LaunchConfig& launch = {});

}  // namespace pkrylov
