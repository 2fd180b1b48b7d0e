#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "pkrylov/trace.hpp"
#include "pkrylov/vector.hpp"

namespace pkrylov {

/// Upper triangular factor R of order m, column-major. Entry (j, i) with
/// j <= i holds the projection of the i-th new direction onto basis vector j;
/// the diagonal holds the norm before normalization.
class UpperTriangular {
public:
    UpperTriangular() = default;
    explicit UpperTriangular(std::size_t order) : m_(order), data_(order * order, 0.0) {}

    std::size_t order() const noexcept { return m_; }

    double& operator()(std::size_t j, std::size_t i) noexcept { return data_[i * m_ + j]; }
    double operator()(std::size_t j, std::size_t i) const noexcept { return data_[i * m_ + j]; }

    void clear() noexcept { std::fill(data_.begin(), data_.end(), 0.0); }

private:
    std::size_t m_ = 0;
    std::vector<double> data_;
};

/// Back substitution on the leading rhs.size() block of R. Host side, no
/// launches. Throws BreakdownError(singular_triangular) on a zero diagonal.
DenseVector solve_upper_triangular(const UpperTriangular& r, std::span<const double> rhs);

/// Classical Gram-Schmidt with unfused kernels: all inner products first
/// (one launch and one transfer each), then one axpy per basis vector.
/// Returns the coefficients.
std::vector<double> orthogonalize_cgs(std::span<const DenseVector> basis, DenseVector& v,
                                      const ExecContext& ctx = {});

/// Modified Gram-Schmidt: for each basis vector in turn, one inner product
/// against the current v followed by its axpy. Only one inner product can be
/// in flight at a time. Returns the coefficients.
std::vector<double> orthogonalize_mgs(std::span<const DenseVector> basis, DenseVector& v,
                                      const ExecContext& ctx = {});

}  // namespace pkrylov
