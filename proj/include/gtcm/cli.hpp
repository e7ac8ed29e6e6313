#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gtcm/catalog.hpp"
#include "gtcm/code.hpp"
#include "gtcm/constellation.hpp"
#include "gtcm/frame.hpp"
#include "gtcm/free_distance.hpp"
#include "gtcm/interleave.hpp"
#include "gtcm/link_sim.hpp"
#include "gtcm/search.hpp"

namespace gtcm::cli {

namespace detail {

/// Shortest decimal form that still reads as a float ("6.0", "1.523809524").
inline std::string fmt_num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    std::string s(buf);
    if (s.find_first_of(".einao") == std::string::npos) s += ".0";
    return s;
}

inline std::string fmt2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty item in integer list");
        out.push_back(std::stoi(item));
    }
    return out;
}

/// Register lengths from --reg when given, from an even --v split otherwise,
/// or empty so the parser infers them from the tap degrees.
inline std::vector<int> reg_choice(int k, int v, const std::string& reg_text) {
    if (!reg_text.empty()) return parse_int_list(reg_text);
    if (v >= 0) return split_reg_lengths(k, v);
    return {};
}

/// Catalog resolution order: --catalog flag, GTCM_CATALOG, built-in table.
inline std::vector<CatalogEntry> resolve_catalog(const std::string& flag_path) {
    std::string path = flag_path;
    if (path.empty()) {
        const char* env = std::getenv("GTCM_CATALOG");
        if (env) path = env;
    }
    if (path.empty()) return builtin_catalog();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog file: " + path);
    return load_catalog(in);
}

/// Pick the tap reading under which the entry's code validates.
inline CodeSpec usable_code(const CatalogEntry& e) {
    CodeSpec c = code_from_entry(e, TapConvention::direct);
    if (validate(c) == CodeStatus::valid) return c;
    CodeSpec r = code_from_entry(e, TapConvention::reversed);
    if (validate(r) == CodeStatus::valid) return r;
    throw std::runtime_error("catalog entry is not a valid code under either tap order");
}

inline Bytes hex_to_bytes(const std::string& hex) {
    if (hex.size() % 2) throw std::invalid_argument("odd hex length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("bad hex digit");
    };
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2)
        out.push_back(uint8_t(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
    return out;
}

inline std::string bytes_to_hex(const Bytes& data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

}  // namespace detail

/// Front door used by both the binary and the tests. args excludes the
/// program name. Returns 0 on success, 1 on domain errors, 2 on usage
/// errors; errors are single lines on err.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"trellis-coded modulation toolkit: code search, distance "
                 "analysis, link simulation, and concealed framing"};
    app.require_subcommand(1);

    std::string opt_code, opt_target = "qpsk", opt_source, opt_reg, opt_catalog;
    std::string opt_scenario, opt_key, opt_payload_hex, opt_frame_hex, opt_in_path;
    int opt_k = 1, opt_n = 2, opt_v = -1, opt_vmax = 10;
    uint64_t opt_trials = 10000, opt_seed = 1, opt_errors = 1000;
    uint64_t opt_mcs = 0, opt_seq = 0, opt_r = 0, opt_block = 251, opt_m = 251;
    uint64_t opt_packet = 0, opt_blkidx = 0, opt_block_steps = 8192, opt_bits = 0;
    double opt_from = 0.0, opt_to = 10.0, opt_step = 1.0, opt_budget = 1e7;
    double opt_time_box = 0.0, opt_tol = 0.01;
    bool opt_full = false, opt_interleave = false;

    auto* c_dist = app.add_subcommand("distance", "free squared distance and gain of one code");
    c_dist->add_option("--code", opt_code, "generator taps, octal, e.g. \"(1 3)\"")->required();
    c_dist->add_option("--k", opt_k, "input bits per step")->required();
    c_dist->add_option("--n", opt_n, "output bits per step")->required();
    c_dist->add_option("--v", opt_v, "total memory cells, split evenly");
    c_dist->add_option("--reg", opt_reg, "per-register cells, comma separated");
    c_dist->add_option("--target", opt_target, "target constellation")->required();
    c_dist->add_option("--source", opt_source, "source constellation (default: fits k)");

    auto* c_search = app.add_subcommand("search", "find the best code for a shape");
    c_search->add_option("--k", opt_k)->required();
    c_search->add_option("--n", opt_n)->required();
    c_search->add_option("--v", opt_v, "total memory cells, split evenly");
    c_search->add_option("--reg", opt_reg, "per-register cells, comma separated");
    c_search->add_option("--target", opt_target)->required();
    c_search->add_option("--trials", opt_trials, "random draws");
    c_search->add_option("--seed", opt_seed);
    c_search->add_flag("--full", opt_full, "enumerate every code instead");

    auto* c_verify = app.add_subcommand("verify-catalog", "recompute every published gain");
    c_verify->add_option("--catalog", opt_catalog, "catalog file (default: $GTCM_CATALOG)");
    c_verify->add_option("--vmax", opt_vmax, "skip entries with more memory");
    c_verify->add_option("--time-box", opt_time_box, "seconds allowed per entry");
    c_verify->add_option("--tol", opt_tol, "gain tolerance, dB");

    auto* c_cat = app.add_subcommand("catalog", "print the active code catalog");
    c_cat->add_option("--catalog", opt_catalog, "catalog file (default: $GTCM_CATALOG)");

    auto* c_sweep = app.add_subcommand("sweep", "simulated bit error rate over a noise range");
    c_sweep->add_option("--scenario", opt_scenario, "uncoded:<mod> or coded:<catalog index>")
        ->required();
    c_sweep->add_option("--from", opt_from, "first Eb/N0, dB");
    c_sweep->add_option("--to", opt_to, "last Eb/N0, dB");
    c_sweep->add_option("--step", opt_step, "grid step, dB");
    c_sweep->add_option("--budget", opt_budget, "bit budget per point");
    c_sweep->add_option("--errors", opt_errors, "stop a point at this error count");
    c_sweep->add_option("--seed", opt_seed);
    c_sweep->add_option("--block-steps", opt_block_steps, "info steps per coded block");
    c_sweep->add_flag("--interleave", opt_interleave, "keyed symbol shuffle across the channel");
    c_sweep->add_option("--key", opt_key, "interleaver key text");
    c_sweep->add_option("--block", opt_block, "interleaver block size, prime");
    c_sweep->add_option("--catalog", opt_catalog, "catalog file (default: $GTCM_CATALOG)");

    auto* c_enc = app.add_subcommand("frame-encode", "build one concealed frame as hex");
    c_enc->add_option("--key", opt_key, "shared key text")->required();
    c_enc->add_option("--mcs", opt_mcs, "catalog index of the payload code")->required();
    c_enc->add_option("--seq", opt_seq, "packet number");
    c_enc->add_option("--r", opt_r, "per-packet freshness value");
    c_enc->add_option("--payload-hex", opt_payload_hex, "payload bytes, hex");
    c_enc->add_option("--bits", opt_bits, "payload length in bits (default: all)");
    c_enc->add_option("--block", opt_block, "interleaver block size, prime");
    c_enc->add_option("--seed", opt_seed, "padding-symbol seed");
    c_enc->add_option("--catalog", opt_catalog, "catalog file (default: $GTCM_CATALOG)");

    auto* c_decf = app.add_subcommand("frame-decode", "parse one frame from hex");
    c_decf->add_option("--key", opt_key, "shared key text")->required();
    c_decf->add_option("--frame", opt_frame_hex, "frame dump, hex");
    c_decf->add_option("--in", opt_in_path, "file holding the hex dump");
    c_decf->add_option("--block", opt_block, "interleaver block size, prime");
    c_decf->add_option("--catalog", opt_catalog, "catalog file (default: $GTCM_CATALOG)");

    auto* c_il = app.add_subcommand("interleave-demo", "print one derived permutation");
    c_il->add_option("--key", opt_key, "shared key text")->required();
    c_il->add_option("--packet", opt_packet, "packet number");
    c_il->add_option("--block", opt_blkidx, "block index inside the packet");
    c_il->add_option("--m", opt_m, "permutation size, prime");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (app.got_subcommand(c_dist)) {
            auto reg = detail::reg_choice(opt_k, opt_v, opt_reg);
            CodeSpec code = parse_generators(opt_code, opt_k, opt_n, reg);
            CodeStatus st = validate(code);
            if (st == CodeStatus::catastrophic)
                throw std::runtime_error("code is catastrophic; its free distance is unbounded"
                                         " in no useful sense");
            Modulation target = build(mod_from_string(opt_target));
            Modulation source = opt_source.empty() ? build(source_mod_for_bits(opt_k))
                                                   : build(mod_from_string(opt_source));
            auto res = compute_distance(code, target);
            out << "d_sq,beta_db,L\n"
                << detail::fmt_num(res.d_sq_free) << ','
                << detail::fmt2(coding_gain_db(res.d_sq_free, source)) << ','
                << res.merge_depth << '\n';
            return 0;
        }

        if (app.got_subcommand(c_search)) {
            auto reg = detail::reg_choice(opt_k, opt_v, opt_reg);
            if (reg.empty()) throw std::runtime_error("search needs --v or --reg");
            SearchResult res;
            if (opt_full) {
                res = full_search(opt_k, opt_n, reg, mod_from_string(opt_target));
            } else {
                SearchSpec spec;
                spec.k = opt_k;
                spec.n = opt_n;
                spec.reg_lengths = reg;
                spec.target = mod_from_string(opt_target);
                spec.trials = opt_trials;
                spec.seed = opt_seed;
                res = random_search(spec);
            }
            if (!res.best) throw std::runtime_error("no valid code found for this shape");
            int v = 0;
            for (int vi : reg) v += vi;
            out << "k,n,v,target,trials,valid,d_sq,beta_db,L,taps\n"
                << opt_k << ',' << opt_n << ',' << v << ',' << opt_target << ','
                << res.trials_run << ',' << res.valid_count << ','
                << detail::fmt_num(res.d_sq_free) << ',' << detail::fmt2(res.beta_db) << ','
                << res.merge_depth << ',' << format_generators(*res.best) << '\n';
            return 0;
        }

        if (app.got_subcommand(c_verify)) {
            auto entries = detail::resolve_catalog(opt_catalog);
            auto outcomes = verify_catalog(entries, opt_vmax, opt_time_box, opt_tol);
            out << "index,source,target,v,taps,beta_expected,beta_recomputed,d_sq,L,"
                   "convention,status,checked,ok\n";
            size_t checked = 0, ok = 0, mismatch = 0, skipped = 0;
            for (size_t i = 0; i < outcomes.size(); ++i) {
                const auto& o = outcomes[i];
                const auto& e = o.entry;
                out << i << ',' << to_string(e.source) << ',' << to_string(e.target) << ','
                    << e.v << ',' << e.generators << ',' << detail::fmt2(e.beta_db) << ','
                    << detail::fmt2(o.beta_rec) << ',' << detail::fmt_num(o.d_sq) << ','
                    << o.merge_depth << ',' << o.convention << ',' << o.status << ','
                    << (o.checked ? 1 : 0) << ',' << (o.ok ? 1 : 0) << '\n';
                if (!o.checked)
                    ++skipped;
                else if (o.ok)
                    ++checked, ++ok;
                else
                    ++checked, ++mismatch;
            }
            out << "# checked=" << checked << " ok=" << ok << " mismatch=" << mismatch
                << " skipped=" << skipped << '\n';
            if (mismatch) {
                err << "error: " << mismatch << " catalog entries failed verification\n";
                return 1;
            }
            return 0;
        }

        if (app.got_subcommand(c_cat)) {
            save_catalog(out, detail::resolve_catalog(opt_catalog));
            return 0;
        }

        if (app.got_subcommand(c_sweep)) {
            auto colon = opt_scenario.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error("scenario must be uncoded:<mod> or coded:<index>");
            std::string kind = opt_scenario.substr(0, colon);
            std::string what = opt_scenario.substr(colon + 1);
            std::vector<SweepPoint> points;
            if (kind == "uncoded") {
                UncodedSweepSpec spec;
                spec.mod = mod_from_string(what);
                spec.start_db = opt_from;
                spec.stop_db = opt_to;
                spec.step_db = opt_step;
                spec.max_bits = uint64_t(opt_budget);
                spec.target_errors = opt_errors;
                spec.seed = opt_seed;
                points = run_uncoded_sweep(spec);
            } else if (kind == "coded") {
                auto entries = detail::resolve_catalog(opt_catalog);
                size_t idx = std::stoul(what);
                if (idx >= entries.size()) throw std::runtime_error("catalog index out of range");
                CodedSweepSpec spec;
                spec.code = detail::usable_code(entries[idx]);
                spec.target = entries[idx].target;
                spec.start_db = opt_from;
                spec.stop_db = opt_to;
                spec.step_db = opt_step;
                spec.max_bits = uint64_t(opt_budget);
                spec.target_errors = opt_errors;
                spec.seed = opt_seed;
                spec.block_steps = opt_block_steps;
                spec.interleave = opt_interleave;
                spec.key = Bytes(opt_key.begin(), opt_key.end());
                spec.block_size = opt_block;
                points = run_coded_sweep(spec);
            } else {
                throw std::runtime_error("scenario must be uncoded:<mod> or coded:<index>");
            }
            write_sweep_csv(out, opt_scenario, points);
            return 0;
        }

        if (app.got_subcommand(c_enc)) {
            auto entries = detail::resolve_catalog(opt_catalog);
            Bytes key(opt_key.begin(), opt_key.end());
            Bytes payload_bytes = detail::hex_to_bytes(opt_payload_hex);
            auto bits = gtcm::detail::bytes_to_bits_msb(payload_bytes.data(),
                                                        payload_bytes.size());
            if (opt_bits) {
                if (opt_bits > bits.size())
                    throw std::runtime_error("--bits exceeds the supplied payload");
                bits.resize(opt_bits);
            }
            std::mt19937_64 pad_rng(opt_seed);
            Frame f = build_frame(key, uint8_t(opt_mcs), uint32_t(opt_seq), opt_r, bits,
                                  entries, opt_block, pad_rng);
            out << frame_to_hex(f) << '\n';
            return 0;
        }

        if (app.got_subcommand(c_decf)) {
            std::string hex = opt_frame_hex;
            if (hex.empty() && !opt_in_path.empty()) {
                std::ifstream in(opt_in_path);
                if (!in) throw std::runtime_error("cannot open frame file: " + opt_in_path);
                in >> hex;
            }
            if (hex.empty()) throw std::runtime_error("frame-decode needs --frame or --in");
            auto entries = detail::resolve_catalog(opt_catalog);
            Bytes key(opt_key.begin(), opt_key.end());
            Frame f = frame_from_hex(hex);
            ParsedFrame p = parse_frame(key, f.samples(), entries, opt_block);
            out << "mcs_id,seq,payload_len,r,payload_hex\n"
                << unsigned(p.header.mcs_id) << ',' << p.header.seq << ','
                << p.header.payload_len << ',' << p.header.r << ','
                << detail::bytes_to_hex(gtcm::detail::bits_to_bytes_msb(p.payload_bits)) << '\n';
            return 0;
        }

        if (app.got_subcommand(c_il)) {
            Bytes key(opt_key.begin(), opt_key.end());
            auto p = derive_permutation(key, opt_packet, opt_blkidx, opt_m);
            out << "# a=" << p.a << " b=" << p.b << " m=" << p.m << '\n';
            out << "position,source\n";
            for (uint64_t x = 0; x < p.m; ++x) out << x << ',' << p.map(x) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace gtcm::cli
