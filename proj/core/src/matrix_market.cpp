#include "pkrylov/matrix_market.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pkrylov/errors.hpp"

namespace pkrylov {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const auto start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line_no, const char* what) {
    T value{};
    // from_chars rejects a leading '+', which some writers emit.
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("matrix market: bad " + std::string(what) + " '" + std::string(tok) + "'",
                         line_no);
    }
    return value;
}

/// Line cursor over an in-memory file.
class Lines {
public:
    explicit Lines(std::string text) : text_(std::move(text)) {}

    bool next(std::string_view& line) {
        if (pos_ >= text_.size()) return false;
        auto eol = text_.find('\n', pos_);
        if (eol == std::string::npos) eol = text_.size();
        line = std::string_view(text_).substr(pos_, eol - pos_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos_ = eol + 1;
        ++line_no_;
        return true;
    }
    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::string text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

MatrixMarketHeader parse_matrix_market_banner(std::string_view line, std::size_t line_no) {
    const auto tok = split_ws(line);
    if (tok.size() != 5 || lower(tok[0]) != "%%matrixmarket") {
        throw ParseError("matrix market: missing or malformed banner", line_no);
    }
    if (lower(tok[1]) != "matrix") {
        throw ParseError("matrix market: object '" + std::string(tok[1]) + "' unsupported", line_no);
    }
    if (lower(tok[2]) != "coordinate") {
        throw ParseError("matrix market: format '" + std::string(tok[2]) + "' unsupported", line_no);
    }
    MatrixMarketHeader h;
    const auto field = lower(tok[3]);
    if (field == "real" || field == "double") {
        h.field = MatrixMarketHeader::Field::real;
    } else if (field == "integer") {
        h.field = MatrixMarketHeader::Field::integer;
    } else if (field == "pattern") {
        h.field = MatrixMarketHeader::Field::pattern;
    } else {
        throw ParseError("matrix market: field '" + std::string(tok[3]) + "' unsupported", line_no);
    }
    const auto sym = lower(tok[4]);
    if (sym == "general") {
        h.symmetry = MatrixMarketHeader::Symmetry::general;
    } else if (sym == "symmetric") {
        h.symmetry = MatrixMarketHeader::Symmetry::symmetric;
    } else {
        throw ParseError("matrix market: symmetry '" + std::string(tok[4]) + "' unsupported",
                         line_no);
    }
    return h;
}

CsrMatrix read_matrix_market(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    Lines lines(buf.str());

    std::string_view line;
    if (!lines.next(line)) throw ParseError("matrix market: empty input", 1);
    const auto header = parse_matrix_market_banner(line, lines.line_no());

    // Comments and blank lines may precede the size line.
    do {
        if (!lines.next(line)) throw ParseError("matrix market: missing size line", lines.line_no());
    } while (blank(line) || line.front() == '%');

    const auto size_tok = split_ws(line);
    if (size_tok.size() != 3) {
        throw ParseError("matrix market: size line needs rows, cols and entries", lines.line_no());
    }
    const auto n_rows = parse_number<std::size_t>(size_tok[0], lines.line_no(), "row count");
    const auto n_cols = parse_number<std::size_t>(size_tok[1], lines.line_no(), "column count");
    const auto declared = parse_number<std::size_t>(size_tok[2], lines.line_no(), "entry count");
    if (header.symmetry == MatrixMarketHeader::Symmetry::symmetric && n_rows != n_cols) {
        throw ParseError("matrix market: symmetric matrix must be square", lines.line_no());
    }

    const bool pattern = header.field == MatrixMarketHeader::Field::pattern;
    const bool symmetric = header.symmetry == MatrixMarketHeader::Symmetry::symmetric;
    std::vector<Triplet> entries;
    entries.reserve(symmetric ? 2 * declared : declared);

    std::size_t seen = 0;
    while (lines.next(line)) {
        if (blank(line) || line.front() == '%') continue;
        const auto tok = split_ws(line);
        if (seen == declared) {
            throw ParseError("matrix market: more entries than declared", lines.line_no());
        }
        if (tok.size() != (pattern ? 2U : 3U)) {
            throw ParseError("matrix market: wrong number of fields in entry", lines.line_no());
        }
        const auto i = parse_number<std::size_t>(tok[0], lines.line_no(), "row index");
        const auto j = parse_number<std::size_t>(tok[1], lines.line_no(), "column index");
        if (i < 1 || i > n_rows || j < 1 || j > n_cols) {
            throw RangeError("matrix market: entry (" + std::string(tok[0]) + ", " +
                                 std::string(tok[1]) + ") outside " + std::to_string(n_rows) +
                                 "x" + std::to_string(n_cols),
                             lines.line_no());
        }
        const double v = pattern ? 1.0 : parse_number<double>(tok[2], lines.line_no(), "value");
        entries.push_back({i - 1, j - 1, v});
        if (symmetric && i != j) entries.push_back({j - 1, i - 1, v});
        ++seen;
    }
    if (seen != declared) {
        throw ParseError("matrix market: expected " + std::to_string(declared) + " entries, found " +
                             std::to_string(seen),
                         lines.line_no());
    }
    return CsrMatrix::from_triplets(n_rows, n_cols, std::move(entries));
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open matrix file '" + path.string() + "'");
    return read_matrix_market(in);
}

void write_matrix_market(const CsrMatrix& a, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    std::array<char, 64> buf{};
    const auto off = a.row_offsets();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (auto k = off[i]; k < off[i + 1]; ++k) {
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), a.values()[k]);
            out << (i + 1) << ' ' << (a.col_indices()[k] + 1) << ' '
                << std::string_view(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()))
                << '\n';
        }
    }
}

void write_matrix_market(const CsrMatrix& a, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write matrix file '" + path.string() + "'");
    write_matrix_market(a, out);
    if (!out) throw IoError("error while writing '" + path.string() + "'");
}

}  // namespace pkrylov
