#include "pkrylov/blas.hpp"

#include <string>

#include "pkrylov/errors.hpp"

namespace pkrylov {

namespace {

void require_same(const DenseVector& x, const DenseVector& y, const char* op) {
    if (x.size() != y.size()) {
        throw ShapeError(std::string(op) + ": lengths " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()) + " differ");
    }
}

}  // namespace

void axpy(double a, const DenseVector& x, DenseVector& y, const ExecContext& ctx) {
    require_same(x, y, "axpy");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
    ctx.launch(24ULL * y.size());
}

void xpay(const DenseVector& x, double a, DenseVector& y, const ExecContext& ctx) {
    require_same(x, y, "xpay");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + a * y[i];
    ctx.launch(24ULL * y.size());
}

void scal(double a, DenseVector& x, const ExecContext& ctx) {
    for (auto& v : x) v *= a;
    ctx.launch(16ULL * x.size());
}

void scal_inverse(double d, DenseVector& x, const ExecContext& ctx) {
    for (auto& v : x) v /= d;
    ctx.launch(16ULL * x.size());
}

void copy(const DenseVector& x, DenseVector& y, const ExecContext& ctx) {
    require_same(x, y, "copy");
    y = x;
    ctx.launch(16ULL * y.size());
}

void multi_axpy(std::span<const double> coeffs, std::span<const DenseVector* const> vectors,
                DenseVector& y, const ExecContext& ctx) {
    if (coeffs.size() != vectors.size()) throw ShapeError("multi_axpy: coefficient count");
    for (const auto* v : vectors) require_same(*v, y, "multi_axpy");
    for (std::size_t i = 0; i < y.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < vectors.size(); ++j) acc += coeffs[j] * (*vectors[j])[i];
        y[i] += acc;
    }
    ctx.launch(8ULL * y.size() * (vectors.size() + 2));
}

DenseVector residual(MatrixView a, const DenseVector& b, const DenseVector& x,
                     const ExecContext& ctx) {
    if (a.cols() != x.size() || a.rows() != b.size()) {
        throw ShapeError("residual: operand shapes do not match the matrix");
    }
    DenseVector r(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        a.visit_row(i, [&](double v, index_t c) { acc += v * x[c]; });
        r[i] = b[i] - acc;
    }
    ctx.launch(spmv_bytes(a) + 8ULL * b.size());
    return r;
}

}  // namespace pkrylov
