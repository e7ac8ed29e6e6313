#pragma once

// Reference implementations kept deliberately naive and structurally
// different from the library, for cross-checking.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "gtcm/code.hpp"
#include "gtcm/constellation.hpp"

namespace oracle {

// Explicit delay-line encoder: one vector per register, oldest bit at the
// back, tap p reads the bit delayed by p steps.
inline std::vector<uint32_t> ref_encode(const gtcm::CodeSpec& c,
                                        const std::vector<uint8_t>& bits, bool terminate) {
    std::vector<std::vector<int>> delay(c.k);
    for (int i = 0; i < c.k; ++i) delay[i].assign(c.reg_lengths[i], 0);
    std::vector<uint8_t> in(bits);
    if (terminate) in.insert(in.end(), static_cast<size_t>(c.tail_steps()) * c.k, 0);
    std::vector<uint32_t> symbols;
    for (size_t t = 0; t < in.size() / c.k; ++t) {
        uint32_t y = 0;
        for (int j = 0; j < c.n; ++j) {
            int acc = 0;
            for (int i = 0; i < c.k; ++i) {
                for (int tap = 0; tap <= c.reg_lengths[i]; ++tap) {
                    if (!(c.gen[i][j] >> tap & 1)) continue;
                    acc += tap == 0 ? (in[t * c.k + i] & 1) : delay[i][tap - 1];
                }
            }
            y |= uint32_t(acc & 1) << j;
        }
        symbols.push_back(y);
        for (int i = 0; i < c.k; ++i) {
            if (delay[i].empty()) continue;
            delay[i].pop_back();
            delay[i].insert(delay[i].begin(), in[t * c.k + i] & 1);
        }
    }
    return symbols;
}

// Depth-limited branch-and-bound search over ordered path pairs. Seeds every
// diverging input pair from every reachable state and tracks the cheapest
// merge; events longer than max_depth steps are ignored.
inline double brute_force_d2(const gtcm::CodeSpec& c, const gtcm::Modulation& mod,
                             int max_depth) {
    const int S = c.num_states(), I = c.num_inputs(), O = mod.order();
    std::vector<uint32_t> nxt(static_cast<size_t>(S) * I), out(static_cast<size_t>(S) * I);
    for (int s = 0; s < S; ++s)
        for (int x = 0; x < I; ++x) {
            auto r = gtcm::step(c, s, x);
            nxt[static_cast<size_t>(s) * I + x] = r.next;
            out[static_cast<size_t>(s) * I + x] = r.output;
        }

    std::vector<uint8_t> reach(S, 0);
    reach[0] = 1;
    std::vector<int> queue{0};
    while (!queue.empty()) {
        int s = queue.back();
        queue.pop_back();
        for (int x = 0; x < I; ++x) {
            uint32_t t = nxt[static_cast<size_t>(s) * I + x];
            if (!reach[t]) {
                reach[t] = 1;
                queue.push_back(int(t));
            }
        }
    }

    double best = std::numeric_limits<double>::infinity();
    std::function<void(uint32_t, uint32_t, double, int)> dfs = [&](uint32_t a, uint32_t b,
                                                                   double acc, int depth) {
        if (depth >= max_depth) return;
        for (int x = 0; x < I; ++x)
            for (int xt = 0; xt < I; ++xt) {
                double d2 = acc + mod.ed2[static_cast<size_t>(out[a * I + x]) * O + out[b * I + xt]];
                if (d2 >= best) continue;
                uint32_t an = nxt[a * I + x], bn = nxt[b * I + xt];
                if (an == bn)
                    best = d2;
                else
                    dfs(an, bn, d2, depth + 1);
            }
    };

    for (int s = 0; s < S; ++s) {
        if (!reach[s]) continue;
        for (int x = 0; x < I; ++x)
            for (int xt = 0; xt < I; ++xt) {
                if (x == xt) continue;
                double d2 = mod.ed2[static_cast<size_t>(out[s * I + x]) * O + out[s * I + xt]];
                if (d2 >= best) continue;
                uint32_t an = nxt[s * I + x], bn = nxt[s * I + xt];
                if (an == bn)
                    best = d2;
                else
                    dfs(an, bn, d2, 1);
            }
    }
    return best;
}

// Metric of the maximum-likelihood terminated block, by enumerating every
// input block. Only usable for a handful of bits.
inline double ml_block_metric(const gtcm::CodeSpec& c, const gtcm::Modulation& mod,
                              const std::vector<std::complex<double>>& received,
                              int info_bits, bool terminate) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<uint8_t> bits(info_bits);
    for (uint64_t word = 0; word < (uint64_t(1) << info_bits); ++word) {
        for (int i = 0; i < info_bits; ++i) bits[i] = word >> i & 1;
        auto symbols = ref_encode(c, bits, terminate);
        double metric = 0.0;
        for (size_t t = 0; t < symbols.size(); ++t)
            metric += std::norm(received[t] - mod.points[symbols[t]]);
        if (metric < best) best = metric;
    }
    return best;
}

inline double chi2_stat(const std::vector<uint64_t>& counts, double expected) {
    double stat = 0.0;
    for (uint64_t c : counts) {
        double d = double(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

// 1% critical value; exact for small df, Wilson-Hilferty beyond.
inline double chi2_crit_99(int df) {
    static const double small[] = {6.635, 9.210, 11.345, 13.277, 15.086,
                                   16.812, 18.475, 20.090, 21.666, 23.209};
    if (df >= 1 && df <= 10) return small[df - 1];
    double z = 2.3263478740408408;
    double a = 2.0 / (9.0 * df);
    double t = 1.0 - a + z * std::sqrt(a);
    return df * t * t * t;
}

}  // namespace oracle
