#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pkrylov {

/// Counters for one traced section: kernel launches, host-device transfers
/// and the bytes each of them moves.
struct TraceCounts {
    std::uint64_t launches = 0;
    std::uint64_t transfers = 0;
    std::uint64_t bytes_kernel = 0;
    std::uint64_t bytes_transfer = 0;

    TraceCounts& operator+=(const TraceCounts& o) noexcept {
        launches += o.launches;
        transfers += o.transfers;
        bytes_kernel += o.bytes_kernel;
        bytes_transfer += o.bytes_transfer;
        return *this;
    }
    friend bool operator==(const TraceCounts&, const TraceCounts&) = default;
};

/// What a trace record belongs to. Only `iteration` records count as solver
/// iterations; setup work before the loop and per-cycle epilogues (restart,
/// final iterate update, true-residual recompute) are kept apart.
enum class Phase : std::uint8_t { setup, iteration, epilogue };

struct TraceRecord {
    Phase phase = Phase::iteration;
    TraceCounts counts;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Append-only log of launches and transfers.
///
/// Recording requires an open record (`begin`). Records are closed implicitly
/// when the next one begins or explicitly through `end`.
class ExecutionTrace {
public:
    void begin(Phase phase);
    void end() noexcept { open_ = false; }
    bool is_open() const noexcept { return open_; }

    /// Throws UsageError when no record is open.
    void record_launch(std::uint64_t bytes_touched);
    /// Throws UsageError when no record is open.
    void record_transfer(std::uint64_t bytes);

    const std::vector<TraceRecord>& records() const noexcept { return records_; }

    /// Counts of every `iteration` record, in order.
    std::vector<TraceCounts> iterations() const;
    std::size_t iteration_count() const noexcept;

    /// Running totals over all records.
    const TraceCounts& totals() const noexcept { return totals_; }

    friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;

private:
    TraceRecord& current();

    std::vector<TraceRecord> records_;
    TraceCounts totals_;
    bool open_ = false;
};

/// Workgroup geometry used by every reduction. Both values must be powers of
/// two; the element-to-group mapping is a pure function of them.
struct LaunchConfig {
    std::size_t n_groups = 128;
    std::size_t group_size = 256;

    std::size_t global_size() const noexcept { return n_groups * group_size; }
    /// Throws PreconditionError unless both are nonzero powers of two.
    void validate() const;

    friend bool operator==(const LaunchConfig&, const LaunchConfig&) = default;
};

/// The execution context every kernel-level operation runs under. With no
/// trace attached the operations run identically but nothing is recorded.
class ExecContext {
public:
    ExecContext() = default;
    explicit ExecContext(LaunchConfig config, ExecutionTrace* trace = nullptr);

    const LaunchConfig& config() const noexcept { return config_; }
    ExecutionTrace* trace() const noexcept { return trace_; }

    void launch(std::uint64_t bytes_touched) const {
        if (trace_ != nullptr) trace_->record_launch(bytes_touched);
    }
    void transfer(std::uint64_t bytes) const {
        if (trace_ != nullptr) trace_->record_transfer(bytes);
    }
    void begin(Phase phase) const {
        if (trace_ != nullptr) trace_->begin(phase);
    }

    /// Same geometry, no recording. Used for debug-only checks that must not
    /// perturb launch counts.
    ExecContext untraced() const { return ExecContext(config_, nullptr); }

private:
    LaunchConfig config_{};
    ExecutionTrace* trace_ = nullptr;
};

}  // namespace pkrylov
