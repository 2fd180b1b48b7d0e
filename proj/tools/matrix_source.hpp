#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pkrylov/generators.hpp"

namespace pkrylov::cli {

/// A named linear system, loaded from disk or generated.
struct NamedSystem {
    std::string name;
    LinearSystem system;
};

/// Generator spec: `poisson2d:<level>`, `poisson3d:<side>[:<block>]` or
/// `random:<n>:<per_row>[:<seed>]`. `fallback_seed` applies when the random
/// spec has no seed. Throws PreconditionError on malformed specs.
NamedSystem generate(const std::string& spec, std::uint64_t fallback_seed);

/// Expands `family:a..b` (first numeric parameter) into one spec per value.
std::vector<std::string> expand_ladder(const std::string& spec);

/// Loads a Matrix Market file; the right-hand side is all ones.
NamedSystem load(const std::string& path);

}  // namespace pkrylov::cli
