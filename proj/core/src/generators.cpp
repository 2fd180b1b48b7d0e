#include "pkrylov/generators.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "pkrylov/errors.hpp"

namespace pkrylov {

LinearSystem gen_poisson2d(int level) {
    if (level < 1 || level > 12) {
        throw PreconditionError("poisson2d: level must be in [1, 12], got " + std::to_string(level));
    }
    const std::size_t side = (std::size_t{1} << (level + 3)) - 1;
    const std::size_t n = side * side;
    std::vector<index_t> offsets;
    std::vector<index_t> cols;
    std::vector<double> vals;
    offsets.reserve(n + 1);
    cols.reserve(5 * n);
    vals.reserve(5 * n);
    offsets.push_back(0);
    for (std::size_t iy = 0; iy < side; ++iy) {
        for (std::size_t ix = 0; ix < side; ++ix) {
            const auto row = iy * side + ix;
            // Ascending column order: south, west, centre, east, north.
            if (iy > 0) cols.push_back(row - side), vals.push_back(-1.0);
            if (ix > 0) cols.push_back(row - 1), vals.push_back(-1.0);
            cols.push_back(row), vals.push_back(4.0);
            if (ix + 1 < side) cols.push_back(row + 1), vals.push_back(-1.0);
            if (iy + 1 < side) cols.push_back(row + side), vals.push_back(-1.0);
            offsets.push_back(cols.size());
        }
    }
    return {CsrMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals)),
            DenseVector(n, 1.0)};
}

LinearSystem gen_poisson3d_block(std::size_t side, std::size_t block) {
    if (side < 2 || block < 1) {
        throw PreconditionError("poisson3d: need side >= 2 and block >= 1");
    }
    if (side > 2048 || block > 64 || side * side * side * block > (std::size_t{1} << 31)) {
        throw PreconditionError("poisson3d: problem size too large");
    }
    const std::size_t nodes = side * side * side;
    const std::size_t n = nodes * block;
    const double off_block = block > 1 ? 1.0 / (2.0 * static_cast<double>(block)) : 0.0;

    std::vector<index_t> offsets{0};
    std::vector<index_t> cols;
    std::vector<double> vals;
    offsets.reserve(n + 1);
    cols.reserve(7 * block * n);
    vals.reserve(7 * block * n);

    const std::size_t s2 = side * side;
    std::vector<std::pair<std::size_t, double>> stencil;
    for (std::size_t node = 0; node < nodes; ++node) {
        const auto x = node % side;
        const auto y = (node / side) % side;
        const auto z = node / s2;
        stencil.clear();
        if (z > 0) stencil.emplace_back(node - s2, -1.0);
        if (y > 0) stencil.emplace_back(node - side, -1.0);
        if (x > 0) stencil.emplace_back(node - 1, -1.0);
        stencil.emplace_back(node, 6.0);
        if (x + 1 < side) stencil.emplace_back(node + 1, -1.0);
        if (y + 1 < side) stencil.emplace_back(node + side, -1.0);
        if (z + 1 < side) stencil.emplace_back(node + s2, -1.0);

        for (std::size_t bi = 0; bi < block; ++bi) {
            for (const auto& [nb, lap] : stencil) {
                for (std::size_t bj = 0; bj < block; ++bj) {
                    const double coupling = bi == bj ? 1.0 : off_block;
                    cols.push_back(nb * block + bj);
                    vals.push_back(lap * coupling);
                }
            }
            offsets.push_back(cols.size());
        }
    }
    return {CsrMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals)),
            DenseVector(n, 1.0)};
}

CsrMatrix gen_random_rowwise(std::size_t n, std::size_t per_row, std::uint64_t seed) {
    if (per_row == 0 || per_row > n) {
        throw PreconditionError("random rowwise: need 1 <= nonzeros per row (" +
                                std::to_string(per_row) + ") <= n (" + std::to_string(n) + ")");
    }
    // Raw engine output only, so the matrix does not depend on the standard
    // library's distribution implementations.
    std::mt19937_64 rng(seed);
    const auto unit = [&rng] {  // uniform in (0, 1]
        return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
    };

    std::vector<index_t> offsets{0};
    std::vector<index_t> cols;
    std::vector<double> vals;
    offsets.reserve(n + 1);
    cols.reserve(n * per_row);
    vals.reserve(n * per_row);
    std::vector<std::pair<index_t, double>> row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        row.emplace_back(i, static_cast<double>(per_row));
        while (row.size() < per_row) {
            const index_t c = rng() % n;
            const bool taken = std::any_of(row.begin(), row.end(),
                                           [c](const auto& e) { return e.first == c; });
            if (!taken) row.emplace_back(c, -unit());
        }
        std::sort(row.begin(), row.end());
        for (const auto& [c, v] : row) {
            cols.push_back(c);
            vals.push_back(v);
        }
        offsets.push_back(cols.size());
    }
    return CsrMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals));
}

}  // namespace pkrylov
