#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gtcm/code.hpp"
#include "gtcm/constellation.hpp"

namespace gtcm {

/// Per (state, input) successor state and output symbol.
struct TrellisTable {
    int k, n, v, states, inputs;
    std::vector<uint32_t> next;
    std::vector<uint32_t> out;

    explicit TrellisTable(const CodeSpec& c)
        : k(c.k), n(c.n), v(c.v()), states(c.num_states()), inputs(c.num_inputs()),
          next(static_cast<size_t>(states) * inputs), out(next.size()) {
        for (int s = 0; s < states; ++s)
            for (int x = 0; x < inputs; ++x) {
                auto r = step(c, uint32_t(s), uint32_t(x));
                next[static_cast<size_t>(s) * inputs + x] = r.next;
                out[static_cast<size_t>(s) * inputs + x] = r.output;
            }
    }
};

namespace detail {

// Add-compare-select over `steps` trellis sections. metrics(t, bm) fills
// bm[y] with the branch cost of emitting symbol y at section t. Sections at
// or past free_steps only admit input 0 (the termination tail). Paths start
// in state 0; ties keep the lowest predecessor state, then the lowest input.
template <class StepMetrics>
std::vector<uint8_t> viterbi_run(const TrellisTable& tr, size_t steps, size_t free_steps,
                                 bool terminated, StepMetrics&& metrics) {
    if (tr.v + tr.k > 16) throw std::invalid_argument("trellis too large to decode");
    const int S = tr.states, I = tr.inputs;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> pm(S, inf), pm_next(S, inf);
    pm[0] = 0.0;
    std::vector<uint16_t> pred(steps * static_cast<size_t>(S));
    std::vector<double> bm(size_t(1) << tr.n);

    for (size_t t = 0; t < steps; ++t) {
        metrics(t, bm.data());
        std::fill(pm_next.begin(), pm_next.end(), inf);
        uint16_t* pr = &pred[t * S];
        const int allowed = t < free_steps ? I : 1;
        for (int s = 0; s < S; ++s) {
            double base = pm[s];
            if (!(base < inf)) continue;
            const uint32_t* nx = &tr.next[static_cast<size_t>(s) * I];
            const uint32_t* ou = &tr.out[static_cast<size_t>(s) * I];
            for (int x = 0; x < allowed; ++x) {
                double cand = base + bm[ou[x]];
                uint32_t to = nx[x];
                if (cand < pm_next[to]) {
                    pm_next[to] = cand;
                    pr[to] = uint16_t(uint32_t(s) * I + x);
                }
            }
        }
        pm.swap(pm_next);
    }

    int end = 0;
    if (!terminated) {
        double best = inf;
        for (int s = 0; s < S; ++s)
            if (pm[s] < best) {
                best = pm[s];
                end = s;
            }
    }
    if (!(pm[end] < inf)) throw std::runtime_error("no surviving path");

    std::vector<uint8_t> bits(free_steps * tr.k);
    int cur = end;
    for (size_t t = steps; t-- > 0;) {
        uint16_t p = pred[t * S + cur];
        int x = p % I;
        cur = p / I;
        if (t < free_steps)
            for (int i = 0; i < tr.k; ++i) bits[t * tr.k + i] = uint8_t(x >> i & 1);
    }
    return bits;
}

}  // namespace detail

/// Soft-decision decode of one received symbol per trellis section. With
/// terminated the trailing tail_steps sections are forced to input 0 and
/// their bits dropped, so the result has (received.size() - tail) * k bits.
inline std::vector<uint8_t> decode(const CodeSpec& c, const Modulation& mod,
                                   const std::vector<cplx>& received, bool terminated) {
    if (mod.order() != c.num_outputs())
        throw std::invalid_argument("constellation order must be 2^n");
    TrellisTable tr(c);
    size_t steps = received.size();
    size_t free_steps = steps;
    if (terminated) {
        if (steps < static_cast<size_t>(c.tail_steps()))
            throw std::invalid_argument("terminated stream shorter than the tail");
        free_steps = steps - c.tail_steps();
    }
    const cplx* pts = mod.points.data();
    const int order = mod.order();
    return detail::viterbi_run(tr, steps, free_steps, terminated,
                               [&](size_t t, double* bm) {
                                   cplx r = received[t];
                                   for (int y = 0; y < order; ++y) bm[y] = std::norm(r - pts[y]);
                               });
}

/// Soft-decision decode with each coded bit sent as its own antipodal
/// sample, n samples per trellis section, bit j of the symbol at offset j.
/// Bit 0 maps to +1, bit 1 to -1.
inline std::vector<uint8_t> decode_bpsk_stream(const CodeSpec& c,
                                               const std::vector<cplx>& received,
                                               bool terminated) {
    if (received.size() % c.n != 0)
        throw std::invalid_argument("sample count must be a multiple of n");
    TrellisTable tr(c);
    size_t steps = received.size() / c.n;
    size_t free_steps = steps;
    if (terminated) {
        if (steps < static_cast<size_t>(c.tail_steps()))
            throw std::invalid_argument("terminated stream shorter than the tail");
        free_steps = steps - c.tail_steps();
    }
    const int n = c.n, order = c.num_outputs();
    return detail::viterbi_run(
        tr, steps, free_steps, terminated, [&](size_t t, double* bm) {
            double cost[2][6];
            for (int j = 0; j < n; ++j) {
                cplx r = received[t * n + j];
                cost[0][j] = std::norm(r - cplx(1, 0));
                cost[1][j] = std::norm(r - cplx(-1, 0));
            }
            for (int y = 0; y < order; ++y) {
                double m = 0.0;
                for (int j = 0; j < n; ++j) m += cost[y >> j & 1][j];
                bm[y] = m;
            }
        });
}

}  // namespace gtcm
