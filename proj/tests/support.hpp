#pragma once

// Independent oracles and input generators for the test suites. Nothing here
// calls into the library's numerical code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pkrylov/sparse.hpp"
#include "pkrylov/vector.hpp"

namespace pkrylov::testing {

/// splitmix64; small, seedable and stable across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform in [lo, hi).
    double uniform(double lo = -1.0, double hi = 1.0) {
        return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

private:
    std::uint64_t state_;
};

inline DenseVector random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    DenseVector v(n);
    for (auto& e : v) e = rng.uniform(lo, hi);
    return v;
}

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const CsrMatrix& a) {
    Dense d(a.rows(), std::vector<double>(a.cols(), 0.0));
    const auto off = a.row_offsets();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (auto k = off[i]; k < off[i + 1]; ++k) d[i][a.col_indices()[k]] += a.values()[k];
    }
    return d;
}

inline std::vector<double> dense_matvec(const Dense& a, std::span<const double> x) {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    }
    return y;
}

inline double serial_sum(std::span<const double> v) {
    double s = 0.0;
    for (double e : v) s += e;
    return s;
}

inline double serial_dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double abs_dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] * y[i]);
    return s;
}

/// Reassociation bound 8 len eps sum|terms| for a sum of `len` terms.
inline double sum_bound(std::size_t len, double abs_sum) {
    return 8.0 * static_cast<double>(std::max<std::size_t>(len, 1)) *
           std::numeric_limits<double>::epsilon() * abs_sum;
}

/// Gaussian elimination with partial pivoting on a copy.
inline std::vector<double> dense_solve(Dense a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

/// True when the symmetric matrix admits a Cholesky factorization.
inline bool cholesky_ok(Dense a) {
    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
        if (!(d > 0.0)) return false;
        a[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
            a[i][j] = s / a[j][j];
        }
    }
    return true;
}

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// ||a - b|| / ||a||.
inline double rel_vec_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0, n = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += (a[i] - b[i]) * (a[i] - b[i]);
        n += a[i] * a[i];
    }
    return n > 0.0 ? std::sqrt(d / n) : std::sqrt(d);
}

/// Random sparse matrix with roughly `density` of its entries stored.
inline CsrMatrix random_sparse(Rng& rng, std::size_t rows, std::size_t cols, double density) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (rng.uniform(0.0, 1.0) < density) t.push_back({i, j, rng.uniform()});
        }
    }
    return CsrMatrix::from_triplets(rows, cols, std::move(t));
}

}  // namespace pkrylov::testing
