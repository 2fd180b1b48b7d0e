#include "pkrylov/speedup.hpp"

#include "pkrylov/errors.hpp"

namespace pkrylov {

IterationSummary summarize_iterations(const ExecutionTrace& trace) {
    const auto its = trace.iterations();
    IterationSummary out;
    out.iterations = its.size();
    if (its.empty()) return out;
    const std::size_t first = its.size() > 1 ? 1 : 0;
    TraceCounts sum;
    for (std::size_t i = first; i < its.size(); ++i) sum += its[i];
    const auto count = static_cast<double>(its.size() - first);
    out.launches = static_cast<double>(sum.launches) / count;
    out.transfers = static_cast<double>(sum.transfers) / count;
    out.bytes_kernel = static_cast<double>(sum.bytes_kernel) / count;
    out.bytes_transfer = static_cast<double>(sum.bytes_transfer) / count;
    return out;
}

double predicted_time_per_iteration(const ExecutionTrace& trace, const DeviceProfile& profile) {
    const auto its = trace.iterations();
    if (its.empty()) return 0.0;
    double total = 0.0;
    for (const auto& it : its) total += predict_iteration_time(it, profile);
    return total / static_cast<double>(its.size());
}

std::vector<SpeedupRow> speedup_curve(Method method, const std::vector<SpeedupCase>& cases,
                                      const DeviceProfile& profile, const SolverConfig& cfg,
                                      const LaunchConfig& launch) {
    if (cases.empty()) throw PreconditionError("speedup_curve: no sizes given");
    profile.validate();
    std::vector<SpeedupRow> rows;
    rows.reserve(cases.size());
    for (const auto& c : cases) {
        const auto classical = solve(method, Variant::classical, *c.matrix, *c.rhs, {}, cfg, launch);
        const auto pipelined = solve(method, Variant::pipelined, *c.matrix, *c.rhs, {}, cfg, launch);
        SpeedupRow row;
        row.label = c.label;
        row.n = c.matrix->rows();
        row.nnz = c.matrix->nnz();
        row.classical_seconds = predicted_time_per_iteration(classical.trace, profile);
        row.pipelined_seconds = predicted_time_per_iteration(pipelined.trace, profile);
        row.ratio = row.classical_seconds / row.pipelined_seconds;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace pkrylov
