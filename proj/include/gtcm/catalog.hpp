#pragma once

#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gtcm/code.hpp"
#include "gtcm/constellation.hpp"
#include "gtcm/free_distance.hpp"

namespace gtcm {

/// One published code: shape is implied by the modulation pair, taps are
/// stored verbatim as octal text.
struct CatalogEntry {
    ModName source;
    ModName target;
    int v = 0;
    double beta_db = 0.0;
    std::string generators;
};

inline const std::vector<CatalogEntry>& builtin_catalog() {
    static const std::vector<CatalogEntry> table = {
    {ModName::bpsk, ModName::qpsk, 1, 1.76, "(1 3)"},
    {ModName::bpsk, ModName::qpsk, 2, 3.98, "(2 7)"},
    {ModName::bpsk, ModName::qpsk, 3, 4.77, "(14 7)"},
    {ModName::bpsk, ModName::qpsk, 4, 5.44, "(4 35)"},
    {ModName::bpsk, ModName::qpsk, 5, 6.02, "(33 64)"},
    {ModName::bpsk, ModName::qpsk, 6, 6.99, "(56 135)"},
    {ModName::bpsk, ModName::qpsk, 7, 6.99, "(374 147)"},
    {ModName::bpsk, ModName::qpsk, 8, 7.78, "(232 561)"},
    {ModName::bpsk, ModName::qpsk, 9, 7.78, "(665 1312)"},
    {ModName::bpsk, ModName::qpsk, 10, 8.45, "(1256 2175)"},
    {ModName::bpsk, ModName::psk8, 2, 3.72, "(4 2 5)"},
    {ModName::bpsk, ModName::psk8, 3, 4.77, "(10 2 17)"},
    {ModName::bpsk, ModName::psk8, 4, 5.36, "(2 4 31)"},
    {ModName::bpsk, ModName::psk8, 5, 6.02, "(10 2 71)"},
    {ModName::bpsk, ModName::psk8, 6, 6.53, "(12 20 107)"},
    {ModName::bpsk, ModName::psk8, 7, 6.99, "(4 102 251)"},
    {ModName::bpsk, ModName::psk8, 8, 7.24, "(30 102 661)"},
    {ModName::bpsk, ModName::psk8, 9, 7.63, "(400 336 1715)"},
    {ModName::bpsk, ModName::psk8, 10, 7.78, "(14 1400 3575)"},
    {ModName::bpsk, ModName::qam16, 3, 3.42, "(10 5 4 17)"},
    {ModName::bpsk, ModName::qam16, 4, 4.15, "(2 27 10 33)"},
    {ModName::bpsk, ModName::qam16, 5, 5.05, "(4 55 10 67)"},
    {ModName::bpsk, ModName::qam16, 6, 5.31, "(2 167 100 31)"},
    {ModName::bpsk, ModName::qam16, 7, 5.80, "(40 327 20 212)"},
    {ModName::bpsk, ModName::qam16, 8, 6.13, "(200 757 14 725)"},
    {ModName::bpsk, ModName::qam16, 9, 6.33, "(30 1137 346 1453)"},
    {ModName::bpsk, ModName::qam16, 10, 6.63, "(774 3103 16 2653)"},
    {ModName::bpsk, ModName::qam64, 5, 3.94, "(2 4 47 40 10 63)"},
    {ModName::bpsk, ModName::qam64, 6, 4.63, "(100 104 55 40 10 117)"},
    {ModName::bpsk, ModName::qam64, 7, 4.91, "(210 44 371 60 4 227)"},
    {ModName::bpsk, ModName::qam64, 8, 5.17, "(362 100 745 52 12 573)"},
    {ModName::bpsk, ModName::qam64, 9, 5.35, "(10 60 1277 344 16 1747)"},
    {ModName::bpsk, ModName::qam64, 10, 5.61, "(6 62 3341 3436 12 2473)"},
    {ModName::psk8, ModName::qam16, 1, 3.11, "(0 1 0 1)(0 1 0 0)(1 0 3 1)"},
    {ModName::psk8, ModName::qam16, 2, 4.36, "(0 0 0 1)(1 3 0 1)(3 2 3 3)"},
    {ModName::psk8, ModName::qam16, 3, 5.33, "(0 1 0 1)(1 3 1 0)(7 1 5 3)"},
    {ModName::psk8, ModName::qam16, 4, 6.12, "(0 1 0 1)(3 2 1 4)(4 6 6 5)"},
    {ModName::psk8, ModName::qam16, 5, 6.12, "(0 1 0 2)(3 7 3 0)(2 2 4 5)"},
    {ModName::psk8, ModName::qam16, 6, 6.79, "(0 1 0 1)(13 13 17 16)(7 6 3 16)"},
    {ModName::psk8, ModName::qam16, 7, 7.37, "(0 1 0 1)(10 15 16 2)(17 11 17 23)"},
    {ModName::psk8, ModName::qam16, 8, 7.37, "(0 2 0 1)(3 17 5 15)(16 15 20 21)"},
    {ModName::psk8, ModName::qam16, 9, 7.37, "(0 1 0 1)(1 5 1 2)(332 10 336 77)"},
    {ModName::psk8, ModName::qam16, 10, 7.37, "(15 0 10 16)(15 10 16 13)(5 33 35 15)"},
    {ModName::psk8, ModName::qam64, 3, 4.15, "(0 0 0 0 0 1)(0 2 1 3 3 2)(2 3 5 7 1 5)"},
    {ModName::psk8, ModName::qam64, 4, 4.66, "(0 0 1 0 0 1)(0 1 1 0 0 2)(4 15 0 1 14 0)"},
    {ModName::psk8, ModName::qam64, 5, 5.12, "(0 0 1 0 0 1)(0 0 1 0 1 3)(4 35 24 13 21 37)"},
    {ModName::psk8, ModName::qam64, 6, 5.53, "(0 0 1 0 0 1)(0 2 1 0 2 2)(12 53 70 36 75 71)"},
    {ModName::psk8, ModName::qam64, 7, 5.73, "(0 2 3 0 2 2)(0 2 1 0 2 3)(12 27 10 4 47 6)"},
    {ModName::psk8, ModName::qam64, 8, 5.91, "(1 0 1 0 0 1)(2 0 0 0 0 3)(172 254 270 6 157 124)"},
    {ModName::psk8, ModName::qam64, 9, 6.26, "(0 0 1 0 0 1)(0 2 1 0 3 5)(1 272 303 300 21 26)"},
    {ModName::psk8, ModName::qam64, 10, 6.42, "(0 0 1 0 0 1)(0 2 1 0 6 6)(12 653 670 236 475 471)"},
    {ModName::qam16, ModName::qam64, 2, 3.31, "(0 0 0 0 0 1)(0 0 1 0 0 1)(2 3 1 1 3 1)(0 3 2 1 0 0)"},
    {ModName::qam16, ModName::qam64, 3, 3.31, "(0 0 1 0 0 0)(2 3 2 1 0 2)(2 0 1 0 3 0)(2 3 1 1 2 1)"},
    {ModName::qam16, ModName::qam64, 4, 4.18, "(0 0 1 0 0 0)(0 0 1 0 0 1)(0 3 0 0 2 1)(1 10 11 6 5 0)"},
    {ModName::qam16, ModName::qam64, 5, 4.56, "(0 0 1 0 0 1)(0 0 1 0 0 0)(0 3 2 1 2 1)(14 24 17 4 3 10)"},
    {ModName::qam16, ModName::qam64, 6, 4.91, "(0 0 0 0 0 1)(0 0 1 0 0 0)(0 3 1 1 2 0)(32 14 12 30 57 63)"},
    {ModName::qam16, ModName::qam64, 7, 5.23, "(0 0 1 0 0 1)(0 0 1 0 0 0)(14 17 12 5 16 11)(14 24 17 4 3 10)"},
    {ModName::qam16, ModName::qam64, 8, 5.53, "(0 0 0 0 0 1)(0 0 1 0 0 1)(26 27 5 15 37 31)(0 23 26 15 0 24)"},
    {ModName::qam16, ModName::qam64, 9, 5.81, "(0 0 0 0 0 1)(0 0 1 0 0 1)(1 12 2 4 7 10)(55 25 123 42 177 73)"},
    {ModName::qam16, ModName::qam64, 10, 5.81, "(0 0 0 0 0 1)(0 0 1 0 0 1)(1 6 6 2 7 4)(317 151 641 302 737 36)"},
    {ModName::qpsk, ModName::psk8, 1, 1.12, "(0 0 1)(1 2 3)"},
    {ModName::qpsk, ModName::psk8, 2, 3.01, "(0 0 1)(2 5 1)"},
    {ModName::qpsk, ModName::psk8, 3, 3.60, "(0 1 2)(2 4 1)"},
    {ModName::qpsk, ModName::psk8, 4, 4.13, "(0 1 3)(6 10 13)"},
    {ModName::qpsk, ModName::psk8, 5, 4.59, "(4 17 13)(0 4 1)"},
    {ModName::qpsk, ModName::psk8, 6, 5.01, "(0 4 3)(12 1 20)"},
    {ModName::qpsk, ModName::psk8, 7, 5.01, "(10 75 30)(0 2 7)"},
    {ModName::qpsk, ModName::psk8, 8, 5.75, "(42 165 134)(0 6 1)"},
    {ModName::qpsk, ModName::psk8, 9, 5.75, "(0 1 6)(122 250 311)"},
    {ModName::qpsk, ModName::psk8, 10, 6.02, "(0 6 7)(376 227 763)"},
    {ModName::qpsk, ModName::qam16, 2, 2.55, "(1 2 2 1)(1 1 0 3)"},
    {ModName::qpsk, ModName::qam16, 3, 3.42, "(0 3 0 1)(6 0 2 5)"},
    {ModName::qpsk, ModName::qam16, 4, 3.80, "(0 5 0 2)(7 2 2 7)"},
    {ModName::qpsk, ModName::qam16, 5, 4.15, "(2 10 14 37)(0 3 2 1)"},
    {ModName::qpsk, ModName::qam16, 6, 4.47, "(1 12 16 11)(1 13 16 7)"},
    {ModName::qpsk, ModName::qam16, 7, 5.05, "(12 25 5 2)(0 4 0 17)"},
    {ModName::qpsk, ModName::qam16, 8, 5.05, "(15 3 12 25)(12 35 24 10)"},
    {ModName::qpsk, ModName::qam16, 9, 5.56, "(47 57 36 65)(1 22 2 13)"},
    {ModName::qpsk, ModName::qam16, 10, 5.56, "(5 31 30 23)(70 27 10 116)"},
    {ModName::qpsk, ModName::qam64, 4, 3.01, "(6 6 1 6 4 12)(1 0 3 2 0 1)"},
    {ModName::qpsk, ModName::qam64, 5, 3.41, "(10 2 15 4 4 12)(4 0 1 2 0 5)"},
    {ModName::qpsk, ModName::qam64, 6, 3.68, "(40 2 72 76 30 75)(0 0 3 2 0 1)"},
    {ModName::qpsk, ModName::qam64, 7, 3.94, "(6 26 71 20 44 66)(0 1 3 0 0 5)"},
    {ModName::qpsk, ModName::qam64, 8, 4.10, "(0 4 3 6 7 15)(34 32 46 34 54 61)"},
    {ModName::qpsk, ModName::qam64, 9, 4.26, "(24 16 110 6 62 73)(4 0 7 4 2 12)"},
    {ModName::qpsk, ModName::qam64, 10, 4.63, "(12 2 7 4 0 17)(330 102 231 140 46 220)"},
    };
    return table;
}

enum class TapConvention { direct, reversed };

/// Code for a catalog entry. Register lengths come from the tap degrees and
/// must add up to the advertised total memory.
inline CodeSpec code_from_entry(const CatalogEntry& e,
                                TapConvention conv = TapConvention::direct) {
    Modulation src = build(e.source), tgt = build(e.target);
    CodeSpec c = parse_generators(e.generators, src.bits_per_symbol, tgt.bits_per_symbol);
    if (c.v() != e.v)
        throw std::invalid_argument("tap degrees disagree with advertised memory for " +
                                    e.generators);
    return conv == TapConvention::direct ? c : reverse_tap_convention(c);
}

struct VerifyOutcome {
    CatalogEntry entry;
    bool checked = false;    // attempted within the memory bound
    bool ok = false;         // recomputed gain matches the published one
    bool timed_out = false;
    std::string convention;  // "direct" or "reversed" when ok
    std::string status;      // validation status of the direct reading
    double d_sq = 0.0;
    double beta_rec = 0.0;
    int merge_depth = 0;
    double seconds = 0.0;
};

/// Recompute one entry's gain, trying the direct tap reading first and the
/// bit-reversed one if that misses the published value.
inline VerifyOutcome verify_entry(const CatalogEntry& e, double time_box_s = 0.0,
                                  double tol_db = 0.01) {
    VerifyOutcome out;
    out.entry = e;
    out.checked = true;
    Modulation source = build(e.source), target = build(e.target);
    auto t0 = std::chrono::steady_clock::now();
    DistanceOptions opt;
    if (time_box_s > 0.0) opt.time_budget_s = time_box_s;
    for (TapConvention conv : {TapConvention::direct, TapConvention::reversed}) {
        CodeSpec c = code_from_entry(e, conv);
        CodeStatus st = validate(c);
        if (conv == TapConvention::direct) out.status = to_string(st);
        if (st != CodeStatus::valid) continue;
        FreeDistanceResult r;
        try {
            r = compute_distance(c, target, opt);
        } catch (const std::runtime_error&) {
            out.timed_out = true;
            break;
        }
        double beta = coding_gain_db(r.d_sq_free, source);
        bool match = std::abs(beta - e.beta_db) <= tol_db;
        if (conv == TapConvention::direct || match) {
            out.d_sq = r.d_sq_free;
            out.beta_rec = beta;
            out.merge_depth = r.merge_depth;
        }
        if (match) {
            out.ok = true;
            out.convention = conv == TapConvention::direct ? "direct" : "reversed";
            break;
        }
    }
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

/// Recompute every entry with total memory at most vmax; entries above that
/// are returned unchecked. time_box_s bounds each entry (0 = no bound).
inline std::vector<VerifyOutcome> verify_catalog(const std::vector<CatalogEntry>& entries,
                                                 int vmax = 10, double time_box_s = 0.0,
                                                 double tol_db = 0.01) {
    std::vector<VerifyOutcome> out;
    out.reserve(entries.size());
    for (const auto& e : entries) {
        if (e.v > vmax) {
            VerifyOutcome skip;
            skip.entry = e;
            out.push_back(skip);
        } else {
            out.push_back(verify_entry(e, time_box_s, tol_db));
        }
    }
    return out;
}

/// Plain-text catalog: one code per line, "source target v beta_db taps",
/// '#' starts a comment.
inline std::vector<CatalogEntry> load_catalog(std::istream& in) {
    std::vector<CatalogEntry> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string src, tgt;
        if (!(ls >> src)) continue;
        CatalogEntry e;
        int v = 0;
        double beta = 0.0;
        if (!(ls >> tgt >> v >> beta))
            throw std::invalid_argument("catalog line " + std::to_string(lineno) +
                                        ": expected 'source target v beta taps'");
        std::getline(ls, e.generators);
        auto first = e.generators.find_first_not_of(" \t");
        if (first == std::string::npos)
            throw std::invalid_argument("catalog line " + std::to_string(lineno) +
                                        ": missing tap matrix");
        e.generators.erase(0, first);
        while (!e.generators.empty() && std::isspace(static_cast<unsigned char>(e.generators.back())))
            e.generators.pop_back();
        e.source = mod_from_string(src);
        e.target = mod_from_string(tgt);
        e.v = v;
        e.beta_db = beta;
        code_from_entry(e);  // shape check
        out.push_back(std::move(e));
    }
    return out;
}

inline void save_catalog(std::ostream& os, const std::vector<CatalogEntry>& entries) {
    os << "# source target v beta_db taps\n";
    char buf[64];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%.2f", e.beta_db);
        os << to_string(e.source) << ' ' << to_string(e.target) << ' ' << e.v << ' ' << buf
           << ' ' << e.generators << '\n';
    }
}

}  // namespace gtcm
