#pragma once

#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gtcm/code.hpp"
#include "gtcm/constellation.hpp"

namespace gtcm {

struct FreeDistanceResult {
    double d_sq_free = std::numeric_limits<double>::infinity();
    int merge_depth = 0;  // trellis steps in the event that set d_sq_free
    bool pruned = false;  // stopped early because d_sq_free <= d_best
    int sweeps = 0;
};

struct DistanceOptions {
    double d_best = 0.0;  // >0 enables pruning against a known best
    std::optional<double> time_budget_s;
};

/// Pairwise state-distance table D[s][t] = least accumulated squared
/// Euclidean distance between two paths that diverged earlier and now sit
/// in states s and t. Diagonal cells are unused.
struct StateDistanceTable {
    int num_states;
    std::vector<double> d;

    explicit StateDistanceTable(int states)
        : num_states(states),
          d(static_cast<size_t>(states) * states, std::numeric_limits<double>::infinity()) {}

    double& at(int s, int t) { return d[static_cast<size_t>(s) * num_states + t]; }
    double at(int s, int t) const { return d[static_cast<size_t>(s) * num_states + t]; }
};

/// Extend the path pair (s ending, t ending) by inputs x and xt. The base
/// distance is 0 when s == t (fresh divergence, requires x != xt), else
/// read.at(s, t). A merge of the successors lowers d_inf; otherwise the
/// candidate min-writes into write. Returns true when anything improved.
inline bool update_distance(const CodeSpec& c, const Modulation& mod,
                            const StateDistanceTable& read, StateDistanceTable& write,
                            uint32_t s, uint32_t x, uint32_t t, uint32_t xt, double& d_inf) {
    auto [sn, sy] = step(c, s, x);
    auto [tn, ty] = step(c, t, xt);
    double base = (s == t) ? 0.0 : read.at(int(s), int(t));
    double cand = base + mod.ed2[static_cast<size_t>(sy) * mod.order() + ty];
    if (sn == tn) {
        if (cand < d_inf) {
            d_inf = cand;
            return true;
        }
        return false;
    }
    double& cell = write.at(int(sn), int(tn));
    if (cand < cell) {
        cell = cand;
        return true;
    }
    return false;
}

/// Free squared Euclidean distance of a valid code over the target
/// constellation. Seeds every ordered diverging input pair from every
/// state, then relaxes the pair table sweep by sweep until no cell below
/// d_sq_free can still improve. Caps at 10 v + 50 sweeps; a catastrophic
/// code trips the cap.
inline FreeDistanceResult compute_distance(const CodeSpec& c, const Modulation& mod,
                                           const DistanceOptions& opt = {}) {
    if (mod.order() != c.num_outputs())
        throw std::invalid_argument("target constellation order must be 2^n");
    const int S = c.num_states(), I = c.num_inputs(), O = c.num_outputs();
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<uint32_t> nxt(static_cast<size_t>(S) * I), out(static_cast<size_t>(S) * I);
    for (int s = 0; s < S; ++s)
        for (int x = 0; x < I; ++x) {
            auto r = step(c, uint32_t(s), uint32_t(x));
            nxt[static_cast<size_t>(s) * I + x] = r.next;
            out[static_cast<size_t>(s) * I + x] = r.output;
        }

    const size_t cells = static_cast<size_t>(S) * S;
    std::vector<double> dist(cells, inf), dist_next;
    std::vector<uint8_t> changed(cells, 0), changed_next;

    FreeDistanceResult res;
    double d_inf = inf;
    int depth_at_best = 0;

    // Depth-1 events: both paths leave the same state on different inputs.
    for (int s = 0; s < S; ++s) {
        const uint32_t* ns = &nxt[static_cast<size_t>(s) * I];
        const uint32_t* os = &out[static_cast<size_t>(s) * I];
        for (int x = 0; x < I; ++x)
            for (int xt = 0; xt < I; ++xt) {
                if (x == xt) continue;
                double cand = mod.ed2[static_cast<size_t>(os[x]) * O + os[xt]];
                if (ns[x] == ns[xt]) {
                    if (cand < d_inf) {
                        d_inf = cand;
                        depth_at_best = 1;
                    }
                } else {
                    size_t idx = static_cast<size_t>(ns[x]) * S + ns[xt];
                    if (cand < dist[idx]) {
                        dist[idx] = cand;
                        changed[idx] = 1;
                    }
                }
            }
    }

    auto finish = [&](bool pruned, int sweeps) {
        res.d_sq_free = d_inf;
        res.merge_depth = depth_at_best;
        res.pruned = pruned;
        res.sweeps = sweeps;
        return res;
    };

    if (opt.d_best > 0.0 && d_inf <= opt.d_best) return finish(true, 0);

    dist_next.resize(cells);
    changed_next.assign(cells, 0);
    const int max_sweeps = 10 * c.v() + 50;
    auto t0 = std::chrono::steady_clock::now();

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        dist_next = dist;
        std::memset(changed_next.data(), 0, cells);
        bool any = false;

        for (int a = 0; a < S; ++a) {
            if (opt.time_budget_s) {
                double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                if (el > *opt.time_budget_s)
                    throw std::runtime_error("distance computation exceeded time budget");
            }
            const uint32_t* na = &nxt[static_cast<size_t>(a) * I];
            const uint32_t* oa = &out[static_cast<size_t>(a) * I];
            const size_t row = static_cast<size_t>(a) * S;
            for (int b = 0; b < S; ++b) {
                if (a == b || !changed[row + b]) continue;
                double base = dist[row + b];
                if (!(base < d_inf)) continue;
                const uint32_t* nb = &nxt[static_cast<size_t>(b) * I];
                const uint32_t* ob = &out[static_cast<size_t>(b) * I];
                for (int x = 0; x < I; ++x) {
                    const double* edrow = &mod.ed2[static_cast<size_t>(oa[x]) * O];
                    uint32_t sn = na[x];
                    for (int xt = 0; xt < I; ++xt) {
                        double cand = base + edrow[ob[xt]];
                        if (!(cand < d_inf)) continue;
                        uint32_t tn = nb[xt];
                        if (sn == tn) {
                            d_inf = cand;
                            depth_at_best = sweep + 1;
                        } else {
                            size_t idx = static_cast<size_t>(sn) * S + tn;
                            if (cand < dist_next[idx]) {
                                dist_next[idx] = cand;
                                changed_next[idx] = 1;
                                any = true;
                            }
                        }
                    }
                }
            }
        }

        if (opt.d_best > 0.0 && d_inf <= opt.d_best) return finish(true, sweep);
        if (!any) return finish(false, sweep);
        dist.swap(dist_next);
        changed.swap(changed_next);
    }
    throw std::runtime_error("state distance iteration did not converge");
}

/// Asymptotic gain of the coded target scheme over the uncoded source.
inline double coding_gain_db(double d_sq_free, const Modulation& source) {
    return 10.0 * std::log10(d_sq_free / source.min_sq_distance);
}

}  // namespace gtcm
