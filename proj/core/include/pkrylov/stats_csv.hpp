#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pkrylov {

inline constexpr int stats_schema_version = 1;

/// One benchmark cell: a (solver, matrix) pair measured over a fixed number of
/// iterations. Failed cells keep their identity columns and carry NaN in the
/// measured ones.
struct StatsRecord {
    int version = stats_schema_version;
    std::string solver;  // e.g. "cg-pipelined"
    std::string matrix;
    std::size_t n = 0;
    std::size_t nnz = 0;
    double ms_per_iter_median = 0.0;  // wall clock, not reproducible
    double launches_per_iter = 0.0;
    double transfers_per_iter = 0.0;
    double predicted_us_per_iter = 0.0;
    double residual_30 = 0.0;

    friend bool operator==(const StatsRecord&, const StatsRecord&) = default;
};

/// version,solver,matrix,n,nnz,ms_per_iter_median,launches_per_iter,
/// transfers_per_iter,predicted_us_per_iter,residual_30
extern const char* const stats_csv_header;

void write_stats_csv(const std::vector<StatsRecord>& records, std::ostream& out);
void write_stats_csv(const std::vector<StatsRecord>& records, const std::filesystem::path& path);

/// Throws ParseError on a wrong header, field count or unknown version.
std::vector<StatsRecord> read_stats_csv(std::istream& in);
std::vector<StatsRecord> read_stats_csv(const std::filesystem::path& path);

}  // namespace pkrylov
