#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "pkrylov/trace.hpp"
#include "pkrylov/vector.hpp"

namespace pkrylov {

/// Stage-one output of a two-stage reduction: one partial sum per workgroup
/// for each of `quantities()` reduced values.
class WorkgroupPartials {
public:
    WorkgroupPartials() = default;
    WorkgroupPartials(std::size_t n_groups, std::size_t n_quantities)
        : n_groups_(n_groups), n_quantities_(n_quantities), data_(n_groups * n_quantities, 0.0) {}

    std::size_t groups() const noexcept { return n_groups_; }
    std::size_t quantities() const noexcept { return n_quantities_; }

    double& at(std::size_t group, std::size_t quantity) noexcept {
        return data_[quantity * n_groups_ + group];
    }
    double at(std::size_t group, std::size_t quantity) const noexcept {
        return data_[quantity * n_groups_ + group];
    }
    /// Partials of one quantity across all groups.
    std::span<const double> quantity(std::size_t q) const noexcept {
        return std::span<const double>(data_).subspan(q * n_groups_, n_groups_);
    }

    /// Appends the quantities of `other`; group counts must match.
    void append(const WorkgroupPartials& other);

    /// Size of a host transfer of these partials.
    std::uint64_t bytes() const noexcept { return 8ULL * data_.size(); }

    friend bool operator==(const WorkgroupPartials&, const WorkgroupPartials&) = default;

private:
    std::size_t n_groups_ = 0;
    std::size_t n_quantities_ = 0;
    std::vector<double> data_;
};

/// Models the per-thread registers of a grid-stride kernel.
///
/// Element i belongs to thread i mod (n_groups * group_size) and threads visit
/// their elements in increasing order. `finish` then sums each workgroup's
/// threads with a binary halving tree. The whole summation order is therefore
/// a pure function of (length, n_groups, group_size).
class Stage1Accumulator {
public:
    Stage1Accumulator(const LaunchConfig& config, std::size_t len, std::size_t n_quantities);

    void add(std::size_t element, std::size_t quantity, double contribution) noexcept {
        registers_[quantity * active_ + element % global_] += contribution;
    }

    WorkgroupPartials finish() const;

private:
    LaunchConfig config_;
    std::size_t global_;
    std::size_t active_;
    std::size_t n_quantities_;
    std::vector<double> registers_;
};

/// Stage one over explicit per-element contributions (one quantity). Records
/// one launch.
WorkgroupPartials reduce_stage1(std::span<const double> contributions, const ExecContext& ctx);

/// Serial left-to-right sum over groups of quantity `q`, without recording.
/// Every finalization, host side or redundantly inside a workgroup, goes
/// through here so they agree bit for bit.
double sum_partials(const WorkgroupPartials& partials, std::size_t q = 0) noexcept;

/// Host-side stage two: one transfer of all partials, then sum_partials for
/// each quantity.
std::vector<double> reduce_stage2(const WorkgroupPartials& partials, const ExecContext& ctx);

/// Stage two for several partial buffers packed into a single transfer.
/// Results are concatenated in argument order.
std::vector<double> reduce_stage2_packed(std::initializer_list<const WorkgroupPartials*> parts,
                                         const ExecContext& ctx);

/// Stage one of <x, y> alone. One launch.
WorkgroupPartials dot_stage1(const DenseVector& x, const DenseVector& y, const ExecContext& ctx = {});

/// Two-stage inner product: one launch plus one transfer under tracing.
double dot(const DenseVector& x, const DenseVector& y, const ExecContext& ctx = {});

/// Two-stage Euclidean norm.
double norm2(const DenseVector& x, const ExecContext& ctx = {});

}  // namespace pkrylov
