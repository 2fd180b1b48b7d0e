#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "pkrylov/trace.hpp"
#include "pkrylov/vector.hpp"

namespace pkrylov {

using index_t = std::size_t;

/// One (row, col, value) entry of coordinate data, 0-based.
struct Triplet {
    index_t row;
    index_t col;
    double value;
};

/// Compressed sparse row matrix in canonical form: row offsets start at 0 and
/// are non-decreasing, column indices are in range and strictly increasing
/// within each row. The constructor rejects anything else.
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<index_t> row_offsets,
              std::vector<index_t> col_indices, std::vector<double> values);

    /// Builds canonical CSR from unordered coordinate data. Duplicate entries
    /// are summed, explicit zeros are kept. Throws PreconditionError on
    /// out-of-range indices.
    static CsrMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                   std::vector<Triplet> entries);

    static CsrMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return n_rows_; }
    std::size_t cols() const noexcept { return n_cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }
    std::size_t row_nnz(std::size_t i) const noexcept {
        return row_offsets_[i + 1] - row_offsets_[i];
    }
    std::size_t max_row_nnz() const noexcept;

    std::span<const index_t> row_offsets() const noexcept { return row_offsets_; }
    std::span<const index_t> col_indices() const noexcept { return col_indices_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Entry (i, j) or 0 when not stored. Binary search within the row.
    double at(std::size_t i, std::size_t j) const;

    CsrMatrix transpose() const;

    friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<index_t> row_offsets_{0};
    std::vector<index_t> col_indices_;
    std::vector<double> values_;
};

/// ELLPACK matrix: every row padded to `width` slots, stored column-major
/// (slot k of row i lives at k * rows + i). Padding slots carry the sentinel
/// column `cols()` and value 0, and only ever trail the real entries of a row.
class EllMatrix {
public:
    EllMatrix() = default;
    EllMatrix(std::size_t n_rows, std::size_t n_cols, std::size_t width,
              std::vector<index_t> col_indices, std::vector<double> values);

    std::size_t rows() const noexcept { return n_rows_; }
    std::size_t cols() const noexcept { return n_cols_; }
    std::size_t width() const noexcept { return width_; }
    index_t sentinel() const noexcept { return n_cols_; }

    std::span<const index_t> col_indices() const noexcept { return col_indices_; }
    std::span<const double> values() const noexcept { return values_; }

    std::size_t slot(std::size_t row, std::size_t k) const noexcept { return k * n_rows_ + row; }
    /// Number of padding slots in `row`.
    std::size_t padding(std::size_t row) const noexcept;

    friend bool operator==(const EllMatrix&, const EllMatrix&) = default;

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::size_t width_ = 0;
    std::vector<index_t> col_indices_;
    std::vector<double> values_;
};

EllMatrix csr_to_ell(const CsrMatrix& a);
CsrMatrix ell_to_csr(const EllMatrix& a);

/// Non-owning handle over either storage format. Solvers and fused kernels
/// take this so both formats run through the same code path.
class MatrixView {
public:
    MatrixView(const CsrMatrix& a) noexcept : ptr_(&a) {}  // NOLINT(google-explicit-constructor)
    MatrixView(const EllMatrix& a) noexcept : ptr_(&a) {}  // NOLINT(google-explicit-constructor)

    std::size_t rows() const noexcept;
    std::size_t cols() const noexcept;
    /// Stored entries including ELL padding.
    std::size_t stored() const noexcept;

    /// Invokes f(value, col) for every real entry of row i in stored order.
    template <typename F>
    void visit_row(std::size_t i, F&& f) const {
        if (const auto* csr = std::get_if<const CsrMatrix*>(&ptr_)) {
            const auto& a = **csr;
            const auto off = a.row_offsets();
            const auto cols = a.col_indices();
            const auto vals = a.values();
            for (auto j = off[i]; j < off[i + 1]; ++j) f(vals[j], cols[j]);
        } else {
            const auto& a = *std::get<const EllMatrix*>(ptr_);
            const auto cols = a.col_indices();
            const auto vals = a.values();
            for (std::size_t k = 0; k < a.width(); ++k) {
                const auto s = a.slot(i, k);
                if (cols[s] == a.sentinel()) break;
                f(vals[s], cols[s]);
            }
        }
    }

    /// Bytes an SpMV streams from the matrix itself (values and indices, each
    /// counted at 8 bytes, plus row offsets for CSR).
    std::uint64_t matrix_bytes() const noexcept;

private:
    std::variant<const CsrMatrix*, const EllMatrix*> ptr_;
};

/// q = A p with each row accumulated left-to-right in stored order. One launch.
DenseVector spmv_csr(const CsrMatrix& a, const DenseVector& p, const ExecContext& ctx = {});
/// As spmv_csr; padding slots contribute nothing.
DenseVector spmv_ell(const EllMatrix& a, const DenseVector& p, const ExecContext& ctx = {});
DenseVector spmv(MatrixView a, const DenseVector& p, const ExecContext& ctx = {});

/// Kernel bytes of a plain SpMV on `a`.
std::uint64_t spmv_bytes(MatrixView a) noexcept;

}  // namespace pkrylov
