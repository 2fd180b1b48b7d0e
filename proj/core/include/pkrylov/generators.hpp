#pragma once

#include <cstddef>
#include <cstdint>

#include "pkrylov/sparse.hpp"
#include "pkrylov/vector.hpp"

namespace pkrylov {

struct LinearSystem {
    CsrMatrix matrix;
    DenseVector rhs;
};

/// Five-point finite-difference Laplacian (4 on the diagonal, -1 for each
/// neighbour) on the (2^(level+3) - 1)^2 interior grid of the unit square,
/// with b = 1. Levels 1..6 give 225, 961, 3969, 16129, 65025 and 261121
/// unknowns. Level must be in [1, 12].
LinearSystem gen_poisson2d(int level);

/// Seven-point Laplacian on a side^3 grid, Kronecker-expanded with a dense
/// b x b SPD coupling block I + (J - I) / (2b), so interior rows hold 7b
/// entries. b = 1 is the plain Laplacian. rhs = 1. Requires side >= 2,
/// block >= 1.
LinearSystem gen_poisson3d_block(std::size_t side, std::size_t block);

/// n x n nonsymmetric matrix with exactly `per_row` entries in every row at
/// distinct uniformly drawn columns. The diagonal is always present and equal
/// to per_row; off-diagonals are -u with u uniform in (0, 1], so every row is
/// strictly diagonally dominant. Pure function of (n, per_row, seed).
/// Throws PreconditionError when per_row is 0 or exceeds n.
CsrMatrix gen_random_rowwise(std::size_t n, std::size_t per_row, std::uint64_t seed);

}  // namespace pkrylov
