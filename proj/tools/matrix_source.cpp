#include "matrix_source.hpp"

#include <charconv>
#include <filesystem>
#include <string_view>

#include "pkrylov/errors.hpp"
#include "pkrylov/matrix_market.hpp"

namespace pkrylov::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::uint64_t number(const std::string& tok, const std::string& spec) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw PreconditionError("bad number '" + tok + "' in generator '" + spec + "'");
    }
    return v;
}

}  // namespace

NamedSystem generate(const std::string& spec, std::uint64_t fallback_seed) {
    const auto parts = split(spec, ':');
    const auto& family = parts.front();
    if (family == "poisson2d" && parts.size() == 2) {
        return {spec, gen_poisson2d(static_cast<int>(number(parts[1], spec)))};
    }
    if (family == "poisson3d" && (parts.size() == 2 || parts.size() == 3)) {
        const auto block = parts.size() == 3 ? number(parts[2], spec) : 1;
        return {spec, gen_poisson3d_block(number(parts[1], spec), block)};
    }
    if (family == "random" && (parts.size() == 3 || parts.size() == 4)) {
        const auto n = number(parts[1], spec);
        const auto seed = parts.size() == 4 ? number(parts[3], spec) : fallback_seed;
        auto a = gen_random_rowwise(n, number(parts[2], spec), seed);
        DenseVector b(n, 1.0);
        return {spec, {std::move(a), std::move(b)}};
    }
    throw PreconditionError("unknown generator '" + spec +
                            "' (poisson2d:<k>, poisson3d:<n>[:<b>], random:<n>:<k>[:<seed>])");
}

std::vector<std::string> expand_ladder(const std::string& spec) {
    auto parts = split(spec, ':');
    if (parts.size() < 2) return {spec};
    const auto dots = parts[1].find("..");
    if (dots == std::string::npos) return {spec};
    const auto lo = number(parts[1].substr(0, dots), spec);
    const auto hi = number(parts[1].substr(dots + 2), spec);
    if (lo > hi) throw PreconditionError("empty ladder '" + spec + "'");
    std::vector<std::string> out;
    for (auto v = lo; v <= hi; ++v) {
        parts[1] = std::to_string(v);
        std::string s = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i) s += ":" + parts[i];
        out.push_back(s);
    }
    return out;
}

NamedSystem load(const std::string& path) {
    auto a = read_matrix_market(std::filesystem::path(path));
    DenseVector b(a.rows(), 1.0);
    return {std::filesystem::path(path).stem().string(), {std::move(a), std::move(b)}};
}

}  // namespace pkrylov::cli
