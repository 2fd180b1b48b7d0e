#include "pkrylov/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pkrylov/errors.hpp"

namespace pkrylov {

Stage1Accumulator::Stage1Accumulator(const LaunchConfig& config, std::size_t len,
                                     std::size_t n_quantities)
    : config_(config),
      global_(config.global_size()),
      active_(std::min(len, config.global_size())),
      n_quantities_(n_quantities),
      registers_(active_ * n_quantities, 0.0) {}

WorkgroupPartials Stage1Accumulator::finish() const {
    const auto gs = config_.group_size;
    WorkgroupPartials out(config_.n_groups, n_quantities_);
    std::vector<double> shared(gs);
    for (std::size_t q = 0; q < n_quantities_; ++q) {
        const double* regs = registers_.data() + q * active_;
        for (std::size_t g = 0; g < config_.n_groups; ++g) {
            const auto first = g * gs;
            if (first >= active_) break;  // idle groups keep their zero partial
            for (std::size_t l = 0; l < gs; ++l) {
                shared[l] = first + l < active_ ? regs[first + l] : 0.0;
            }
            for (auto stride = gs / 2; stride > 0; stride /= 2) {
                for (std::size_t l = 0; l < stride; ++l) shared[l] += shared[l + stride];
            }
            out.at(g, q) = shared[0];
        }
    }
    return out;
}

void WorkgroupPartials::append(const WorkgroupPartials& other) {
    if (n_quantities_ == 0) n_groups_ = other.n_groups_;
    if (other.n_groups_ != n_groups_) throw ShapeError("partials: group counts differ");
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
    n_quantities_ += other.n_quantities_;
}

WorkgroupPartials reduce_stage1(std::span<const double> contributions, const ExecContext& ctx) {
    Stage1Accumulator acc(ctx.config(), contributions.size(), 1);
    for (std::size_t i = 0; i < contributions.size(); ++i) acc.add(i, 0, contributions[i]);
    auto partials = acc.finish();
    ctx.launch(8ULL * contributions.size() + partials.bytes());
    return partials;
}

double sum_partials(const WorkgroupPartials& partials, std::size_t q) noexcept {
    double sum = 0.0;
    for (const double v : partials.quantity(q)) sum += v;
    return sum;
}

std::vector<double> reduce_stage2(const WorkgroupPartials& partials, const ExecContext& ctx) {
    return reduce_stage2_packed({&partials}, ctx);
}

std::vector<double> reduce_stage2_packed(std::initializer_list<const WorkgroupPartials*> parts,
                                         const ExecContext& ctx) {
    std::vector<double> out;
    std::uint64_t bytes = 0;
    for (const auto* p : parts) {
        bytes += p->bytes();
        for (std::size_t q = 0; q < p->quantities(); ++q) out.push_back(sum_partials(*p, q));
    }
    ctx.transfer(bytes);
    return out;
}

WorkgroupPartials dot_stage1(const DenseVector& x, const DenseVector& y, const ExecContext& ctx) {
    if (x.size() != y.size()) {
        throw ShapeError("dot: lengths " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()) + " differ");
    }
    Stage1Accumulator acc(ctx.config(), x.size(), 1);
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(i, 0, x[i] * y[i]);
    auto partials = acc.finish();
    ctx.launch(16ULL * x.size() + partials.bytes());
    return partials;
}

double dot(const DenseVector& x, const DenseVector& y, const ExecContext& ctx) {
    return reduce_stage2(dot_stage1(x, y, ctx), ctx).front();
}

double norm2(const DenseVector& x, const ExecContext& ctx) { return std::sqrt(dot(x, x, ctx)); }

}  // namespace pkrylov
