#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "pkrylov/sparse.hpp"

namespace pkrylov {

/// Banner of a Matrix Market file. Only real coordinate matrices with
/// general or symmetric storage are supported; complex, skew-symmetric,
/// Hermitian and array files are rejected.
struct MatrixMarketHeader {
    enum class Field { real, integer, pattern };
    enum class Symmetry { general, symmetric };

    Field field = Field::real;
    Symmetry symmetry = Symmetry::general;
};

/// Parses the `%%MatrixMarket ...` banner. Throws ParseError tagged with
/// `line_no` on anything unsupported.
MatrixMarketHeader parse_matrix_market_banner(std::string_view line, std::size_t line_no = 1);

/// Reads a coordinate file into canonical CSR: indices become 0-based,
/// symmetric storage is mirrored (diagonal once), duplicates are summed and
/// pattern entries read as 1.0. Throws ParseError or RangeError with the
/// offending line number.
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::filesystem::path& path);

/// Writes `coordinate real general` with shortest round-trip numbers.
void write_matrix_market(const CsrMatrix& a, std::ostream& out);
void write_matrix_market(const CsrMatrix& a, const std::filesystem::path& path);

}  // namespace pkrylov
