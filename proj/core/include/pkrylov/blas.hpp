#pragma once

#include <span>

#include "pkrylov/sparse.hpp"
#include "pkrylov/trace.hpp"
#include "pkrylov/vector.hpp"

namespace pkrylov {

// Unfused BLAS level-1 kernels. Each call is one launch.

/// y <- y + a * x
void axpy(double a, const DenseVector& x, DenseVector& y, const ExecContext& ctx = {});
/// y <- x + a * y
void xpay(const DenseVector& x, double a, DenseVector& y, const ExecContext& ctx = {});
/// x <- a * x
void scal(double a, DenseVector& x, const ExecContext& ctx = {});
/// x <- x / d
void scal_inverse(double d, DenseVector& x, const ExecContext& ctx = {});
/// y <- x
void copy(const DenseVector& x, DenseVector& y, const ExecContext& ctx = {});

/// y <- y + sum_j coeffs[j] * vectors[j], one launch. The sum for each
/// element is formed first, then added to y.
void multi_axpy(std::span<const double> coeffs, std::span<const DenseVector* const> vectors,
                DenseVector& y, const ExecContext& ctx = {});

/// b - A x, computed row by row in one launch.
DenseVector residual(MatrixView a, const DenseVector& b, const DenseVector& x,
                     const ExecContext& ctx = {});

}  // namespace pkrylov
