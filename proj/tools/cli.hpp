#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pkrylov::cli {

inline constexpr int exit_converged = 0;
inline constexpr int exit_breakdown = 2;
inline constexpr int exit_max_iterations = 3;
inline constexpr int exit_usage = 64;
inline constexpr int exit_file = 66;

/// Runs the command line `args` (without the program name) and returns the
/// process exit code. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pkrylov::cli
