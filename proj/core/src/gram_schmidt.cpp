#include "pkrylov/gram_schmidt.hpp"

#include "pkrylov/blas.hpp"
#include "pkrylov/errors.hpp"
#include "pkrylov/reduction.hpp"

namespace pkrylov {

DenseVector solve_upper_triangular(const UpperTriangular& r, std::span<const double> rhs) {
    const auto k = rhs.size();
    if (k > r.order()) throw ShapeError("triangular solve: rhs longer than the factor");
    DenseVector eta(k);
    for (std::size_t ii = k; ii-- > 0;) {
        double acc = rhs[ii];
        for (std::size_t j = ii + 1; j < k; ++j) acc -= r(ii, j) * eta[j];
        if (r(ii, ii) == 0.0) throw BreakdownError(BreakdownKind::singular_triangular);
        eta[ii] = acc / r(ii, ii);
    }
    return eta;
}

std::vector<double> orthogonalize_cgs(std::span<const DenseVector> basis, DenseVector& v,
                                      const ExecContext& ctx) {
    std::vector<double> coeffs;
    coeffs.reserve(basis.size());
    for (const auto& b : basis) coeffs.push_back(dot(b, v, ctx));
    for (std::size_t j = 0; j < basis.size(); ++j) axpy(-coeffs[j], basis[j], v, ctx);
    return coeffs;
}

std::vector<double> orthogonalize_mgs(std::span<const DenseVector> basis, DenseVector& v,
                                      const ExecContext& ctx) {
    std::vector<double> coeffs;
    coeffs.reserve(basis.size());
    for (const auto& b : basis) {
        const double c = dot(b, v, ctx);
        axpy(-c, b, v, ctx);
        coeffs.push_back(c);
    }
    return coeffs;
}

}  // namespace pkrylov
