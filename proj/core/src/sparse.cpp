#include "pkrylov/sparse.hpp"

#include <algorithm>
#include <string>

#include "pkrylov/errors.hpp"

namespace pkrylov {

CsrMatrix::CsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<index_t> row_offsets,
                     std::vector<index_t> col_indices, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
    if (row_offsets_.size() != n_rows_ + 1) {
        throw PreconditionError("csr: row_offsets must have n_rows + 1 entries");
    }
    if (col_indices_.size() != values_.size()) {
        throw PreconditionError("csr: col_indices and values differ in length");
    }
    if (row_offsets_.front() != 0 || row_offsets_.back() != values_.size()) {
        throw PreconditionError("csr: row_offsets must start at 0 and end at nnz");
    }
    for (std::size_t i = 0; i < n_rows_; ++i) {
        if (row_offsets_[i] > row_offsets_[i + 1]) {
            throw PreconditionError("csr: row_offsets decrease at row " + std::to_string(i));
        }
        for (auto j = row_offsets_[i]; j < row_offsets_[i + 1]; ++j) {
            if (col_indices_[j] >= n_cols_) {
                throw PreconditionError("csr: column index out of range in row " +
                                        std::to_string(i));
            }
            if (j > row_offsets_[i] && col_indices_[j] <= col_indices_[j - 1]) {
                throw PreconditionError("csr: columns not strictly increasing in row " +
                                        std::to_string(i));
            }
        }
    }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols,
                                   std::vector<Triplet> entries) {
    for (const auto& t : entries) {
        if (t.row >= n_rows || t.col >= n_cols) {
            throw PreconditionError("csr: triplet (" + std::to_string(t.row) + ", " +
                                    std::to_string(t.col) + ") outside " +
                                    std::to_string(n_rows) + "x" + std::to_string(n_cols));
        }
    }
    // Stable so duplicates are summed in input order.
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    std::vector<index_t> offsets(n_rows + 1, 0);
    std::vector<index_t> cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& t = entries[k];
        if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
            vals.back() += t.value;
            continue;
        }
        cols.push_back(t.col);
        vals.push_back(t.value);
        ++offsets[t.row + 1];
    }
    for (std::size_t i = 0; i < n_rows; ++i) offsets[i + 1] += offsets[i];
    return CsrMatrix(n_rows, n_cols, std::move(offsets), std::move(cols), std::move(vals));
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
    std::vector<index_t> offsets(n + 1);
    std::vector<index_t> cols(n);
    for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    return CsrMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

std::size_t CsrMatrix::max_row_nnz() const noexcept {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n_rows_; ++i) k = std::max(k, row_nnz(i));
    return k;
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= n_rows_ || j >= n_cols_) throw ShapeError("csr: entry index out of bounds");
    const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

CsrMatrix CsrMatrix::transpose() const {
    std::vector<index_t> offsets(n_cols_ + 1, 0);
    for (auto c : col_indices_) ++offsets[c + 1];
    for (std::size_t j = 0; j < n_cols_; ++j) offsets[j + 1] += offsets[j];
    std::vector<index_t> cols(nnz());
    std::vector<double> vals(nnz());
    auto next = offsets;
    for (std::size_t i = 0; i < n_rows_; ++i) {
        for (auto k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            const auto dst = next[col_indices_[k]]++;
            cols[dst] = i;
            vals[dst] = values_[k];
        }
    }
    return CsrMatrix(n_cols_, n_rows_, std::move(offsets), std::move(cols), std::move(vals));
}

EllMatrix::EllMatrix(std::size_t n_rows, std::size_t n_cols, std::size_t width,
                     std::vector<index_t> col_indices, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      width_(width),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
    if (col_indices_.size() != n_rows_ * width_ || values_.size() != n_rows_ * width_) {
        throw PreconditionError("ell: storage must hold rows * width slots");
    }
    for (std::size_t i = 0; i < n_rows_; ++i) {
        bool padded = false;
        for (std::size_t k = 0; k < width_; ++k) {
            const auto s = slot(i, k);
            if (col_indices_[s] == sentinel()) {
                if (values_[s] != 0.0) {
                    throw PreconditionError("ell: padding slot with nonzero value in row " +
                                            std::to_string(i));
                }
                padded = true;
            } else if (padded || col_indices_[s] > n_cols_) {
                throw PreconditionError("ell: invalid column layout in row " + std::to_string(i));
            }
        }
    }
}

std::size_t EllMatrix::padding(std::size_t row) const noexcept {
    std::size_t n = 0;
    for (std::size_t k = 0; k < width_; ++k) n += col_indices_[slot(row, k)] == sentinel() ? 1 : 0;
    return n;
}

EllMatrix csr_to_ell(const CsrMatrix& a) {
    const auto n = a.rows();
    const auto width = a.max_row_nnz();
    std::vector<index_t> cols(n * width, a.cols());
    std::vector<double> vals(n * width, 0.0);
    const auto off = a.row_offsets();
    for (std::size_t i = 0; i < n; ++i) {
        for (auto j = off[i]; j < off[i + 1]; ++j) {
            const auto s = (j - off[i]) * n + i;
            cols[s] = a.col_indices()[j];
            vals[s] = a.values()[j];
        }
    }
    return EllMatrix(n, a.cols(), width, std::move(cols), std::move(vals));
}

CsrMatrix ell_to_csr(const EllMatrix& a) {
    std::vector<index_t> offsets(a.rows() + 1, 0);
    std::vector<index_t> cols;
    std::vector<double> vals;
    MatrixView view(a);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        view.visit_row(i, [&](double v, index_t c) {
            cols.push_back(c);
            vals.push_back(v);
        });
        offsets[i + 1] = cols.size();
    }
    return CsrMatrix(a.rows(), a.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

std::size_t MatrixView::rows() const noexcept {
    return std::visit([](const auto* a) { return a->rows(); }, ptr_);
}

std::size_t MatrixView::cols() const noexcept {
    return std::visit([](const auto* a) { return a->cols(); }, ptr_);
}

std::size_t MatrixView::stored() const noexcept {
    if (const auto* csr = std::get_if<const CsrMatrix*>(&ptr_)) return (*csr)->nnz();
    const auto* ell = std::get<const EllMatrix*>(ptr_);
    return ell->rows() * ell->width();
}

std::uint64_t MatrixView::matrix_bytes() const noexcept {
    std::uint64_t bytes = 16ULL * stored();
    if (std::holds_alternative<const CsrMatrix*>(ptr_)) bytes += 8ULL * (rows() + 1);
    return bytes;
}

std::uint64_t spmv_bytes(MatrixView a) noexcept {
    return a.matrix_bytes() + 8ULL * (a.cols() + a.rows());
}

DenseVector spmv(MatrixView a, const DenseVector& p, const ExecContext& ctx) {
    if (a.cols() != p.size()) {
        throw ShapeError("spmv: matrix has " + std::to_string(a.cols()) +
                         " columns, vector has " + std::to_string(p.size()) + " entries");
    }
    DenseVector q(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        a.visit_row(i, [&](double v, index_t c) { acc += v * p[c]; });
        q[i] = acc;
    }
    ctx.launch(spmv_bytes(a));
    return q;
}

DenseVector spmv_csr(const CsrMatrix& a, const DenseVector& p, const ExecContext& ctx) {
    return spmv(MatrixView(a), p, ctx);
}

DenseVector spmv_ell(const EllMatrix& a, const DenseVector& p, const ExecContext& ctx) {
    return spmv(MatrixView(a), p, ctx);
}

}  // namespace pkrylov
