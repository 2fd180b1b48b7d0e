#include "pkrylov/stats_csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "pkrylov/errors.hpp"

namespace pkrylov {

const char* const stats_csv_header =
    "version,solver,matrix,n,nnz,ms_per_iter_median,launches_per_iter,transfers_per_iter,"
    "predicted_us_per_iter,residual_30";

namespace {

constexpr std::size_t field_count = 10;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void check_name(const std::string& s) {
    if (s.find_first_of(",\n\r\"") != std::string::npos) {
        throw PreconditionError("stats csv: name '" + s + "' contains a separator");
    }
}

template <typename T>
T parse_field(std::string_view tok, std::size_t line_no) {
    T value{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("stats csv: bad field '" + std::string(tok) + "'", line_no);
    }
    return value;
}

}  // namespace

void write_stats_csv(const std::vector<StatsRecord>& records, std::ostream& out) {
    out << stats_csv_header << '\n';
    for (const auto& r : records) {
        check_name(r.solver);
        check_name(r.matrix);
        out << r.version << ',' << r.solver << ',' << r.matrix << ',' << r.n << ',' << r.nnz << ','
            << format_double(r.ms_per_iter_median) << ',' << format_double(r.launches_per_iter)
            << ',' << format_double(r.transfers_per_iter) << ','
            << format_double(r.predicted_us_per_iter) << ',' << format_double(r.residual_30)
            << '\n';
    }
}

void write_stats_csv(const std::vector<StatsRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write stats csv '" + path.string() + "'");
    write_stats_csv(records, out);
    if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::vector<StatsRecord> read_stats_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != stats_csv_header) {
        throw ParseError("stats csv: unexpected header", line_no);
    }
    std::vector<StatsRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::array<std::string_view, field_count> f{};
        std::size_t count = 0;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            if (count < field_count) f[count] = rest.substr(0, comma);
            ++count;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (count != field_count) {
            throw ParseError("stats csv: expected 10 fields, got " + std::to_string(count), line_no);
        }
        StatsRecord r;
        r.version = parse_field<int>(f[0], line_no);
        if (r.version != stats_schema_version) {
            throw ParseError("stats csv: unsupported schema version", line_no);
        }
        r.solver = std::string(f[1]);
        r.matrix = std::string(f[2]);
        r.n = parse_field<std::size_t>(f[3], line_no);
        r.nnz = parse_field<std::size_t>(f[4], line_no);
        r.ms_per_iter_median = parse_field<double>(f[5], line_no);
        r.launches_per_iter = parse_field<double>(f[6], line_no);
        r.transfers_per_iter = parse_field<double>(f[7], line_no);
        r.predicted_us_per_iter = parse_field<double>(f[8], line_no);
        r.residual_30 = parse_field<double>(f[9], line_no);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<StatsRecord> read_stats_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stats csv '" + path.string() + "'");
    return read_stats_csv(in);
}

}  // namespace pkrylov
