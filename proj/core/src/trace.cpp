#include "pkrylov/trace.hpp"

#include <bit>
#include <string>

#include "pkrylov/errors.hpp"

namespace pkrylov {

void ExecutionTrace::begin(Phase phase) {
    records_.push_back(TraceRecord{phase, {}});
    open_ = true;
}

TraceRecord& ExecutionTrace::current() {
    if (!open_ || records_.empty()) {
        throw UsageError("execution trace: recording outside an open record");
    }
    return records_.back();
}

void ExecutionTrace::record_launch(std::uint64_t bytes_touched) {
    TraceCounts delta{1, 0, bytes_touched, 0};
    current().counts += delta;
    totals_ += delta;
}

void ExecutionTrace::record_transfer(std::uint64_t bytes) {
    TraceCounts delta{0, 1, 0, bytes};
    current().counts += delta;
    totals_ += delta;
}

std::vector<TraceCounts> ExecutionTrace::iterations() const {
    std::vector<TraceCounts> out;
    for (const auto& r : records_) {
        if (r.phase == Phase::iteration) out.push_back(r.counts);
    }
    return out;
}

std::size_t ExecutionTrace::iteration_count() const noexcept {
    std::size_t n = 0;
    for (const auto& r : records_) n += r.phase == Phase::iteration ? 1 : 0;
    return n;
}

void LaunchConfig::validate() const {
    if (!std::has_single_bit(n_groups) || !std::has_single_bit(group_size)) {
        throw PreconditionError("launch config: n_groups (" + std::to_string(n_groups) +
                                ") and group_size (" + std::to_string(group_size) +
                                ") must be powers of two");
    }
}

ExecContext::ExecContext(LaunchConfig config, ExecutionTrace* trace)
    : config_(config), trace_(trace) {
    config_.validate();
}

}  // namespace pkrylov
