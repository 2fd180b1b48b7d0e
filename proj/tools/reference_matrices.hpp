#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace pkrylov::cli {

/// Florida collection matrices used for the published comparison. Rows and
/// nonzeros count the loaded matrix, symmetric halves expanded.
struct ReferenceMatrix {
    std::string_view name;
    std::size_t rows;
    std::size_t nnz;
    bool symmetric;
};

inline constexpr std::array<ReferenceMatrix, 12> reference_matrices{{
    {"pdb1HYS", 36417, 4344765, true},
    {"cant", 62451, 4007383, true},
    {"consph", 83334, 6010480, true},
    {"shipsec1", 140874, 7813404, true},
    {"pwtk", 217918, 11643424, true},
    {"rma10", 46835, 2374001, false},
    {"cop20k_A", 121192, 2624331, false},
    {"scircuit", 170998, 958936, false},
    {"mac_econ_fwd500", 206500, 1273389, false},
    {"RM07R", 381689, 37464962, false},
    {"Hamrle3", 1447360, 5514242, false},
    {"kkt_power", 2063494, 13612663, false},
}};

}  // namespace pkrylov::cli
