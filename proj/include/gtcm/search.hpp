#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "gtcm/code.hpp"
#include "gtcm/constellation.hpp"
#include "gtcm/free_distance.hpp"

namespace gtcm {

struct SearchSpec {
    int k = 1;
    int n = 2;
    std::vector<int> reg_lengths;
    ModName target = ModName::qpsk;
    uint64_t trials = 100000;
    uint64_t seed = 1;
};

struct SearchResult {
    std::optional<CodeSpec> best;
    double d_sq_free = 0.0;
    double beta_db = 0.0;
    int merge_depth = 0;
    uint64_t trials_run = 0;
    uint64_t valid_count = 0;
    uint64_t pruned_count = 0;
};

/// Even split of v memory cells over k registers, remainder to the
/// lower-indexed ones.
inline std::vector<int> split_reg_lengths(int k, int v) {
    if (k < 1 || v < 0) throw std::invalid_argument("bad register split");
    std::vector<int> reg(k, v / k);
    for (int i = 0; i < v % k; ++i) reg[i] += 1;
    return reg;
}

/// Uniform random tap matrix for the given shape, row-major draw order.
inline CodeSpec generate_code(int k, int n, const std::vector<int>& reg_lengths,
                              std::mt19937_64& rng) {
    std::vector<std::vector<uint32_t>> gen(k, std::vector<uint32_t>(n));
    for (int i = 0; i < k; ++i) {
        uint32_t mask = (1u << (reg_lengths[i] + 1)) - 1;
        for (int j = 0; j < n; ++j) gen[i][j] = uint32_t(rng()) & mask;
    }
    return make_code(k, n, reg_lengths, std::move(gen));
}

namespace detail {

inline void search_consider(SearchResult& res, const CodeSpec& c, const Modulation& target,
                            const Modulation& source) {
    if (validate(c) != CodeStatus::valid) return;
    res.valid_count++;
    DistanceOptions opt;
    opt.d_best = res.best ? res.d_sq_free : 0.0;
    auto r = compute_distance(c, target, opt);
    if (r.pruned) {
        res.pruned_count++;
        return;
    }
    if (!res.best || r.d_sq_free > res.d_sq_free) {
        res.best = c;
        res.d_sq_free = r.d_sq_free;
        res.beta_db = coding_gain_db(r.d_sq_free, source);
        res.merge_depth = r.merge_depth;
    }
}

}  // namespace detail

/// Draw random tap matrices, keep the valid code with the largest free
/// distance. Earlier draws win ties, so a fixed seed pins the result.
inline SearchResult random_search(const SearchSpec& spec) {
    if (static_cast<int>(spec.reg_lengths.size()) != spec.k)
        throw std::invalid_argument("need one register length per input bit");
    Modulation target = build(spec.target);
    Modulation source = build(source_mod_for_bits(spec.k));
    std::mt19937_64 rng(spec.seed);
    SearchResult res;
    for (uint64_t t = 0; t < spec.trials; ++t) {
        CodeSpec c = generate_code(spec.k, spec.n, spec.reg_lengths, rng);
        res.trials_run++;
        detail::search_consider(res, c, target, source);
    }
    return res;
}

/// Enumerate every tap matrix for the shape, in ascending mask order.
/// Refuses shapes whose enumeration exceeds the cap.
inline SearchResult full_search(int k, int n, const std::vector<int>& reg_lengths,
                                ModName target_name, uint64_t cap = uint64_t(1) << 20) {
    if (static_cast<int>(reg_lengths.size()) != k)
        throw std::invalid_argument("need one register length per input bit");
    int total_bits = 0;
    for (int vi : reg_lengths) total_bits += (vi + 1) * n;
    if (total_bits >= 63 || (uint64_t(1) << total_bits) > cap)
        throw std::invalid_argument("full enumeration too large for the cap");

    Modulation target = build(target_name);
    Modulation source = build(source_mod_for_bits(k));
    SearchResult res;
    const uint64_t total = uint64_t(1) << total_bits;
    std::vector<std::vector<uint32_t>> gen(k, std::vector<uint32_t>(n));
    for (uint64_t word = 0; word < total; ++word) {
        uint64_t w = word;
        for (int i = 0; i < k; ++i) {
            int width = reg_lengths[i] + 1;
            for (int j = 0; j < n; ++j) {
                gen[i][j] = uint32_t(w) & ((1u << width) - 1);
                w >>= width;
            }
        }
        CodeSpec c = make_code(k, n, reg_lengths, gen);
        res.trials_run++;
        detail::search_consider(res, c, target, source);
    }
    return res;
}

}  // namespace gtcm
