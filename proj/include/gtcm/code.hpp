#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gtcm {

/// Feed-forward convolutional encoder, rate k/n, one shift register per
/// input bit. gen[i][j] is the octal tap mask from register i into output
/// bit j; mask bit 0 taps the current input bit, higher bits tap memory
/// cells from newest to oldest.
struct CodeSpec {
    int k = 0;
    int n = 0;
    std::vector<int> reg_lengths;              // memory cells per register
    std::vector<std::vector<uint32_t>> gen;    // k rows of n masks

    int v() const { return std::accumulate(reg_lengths.begin(), reg_lengths.end(), 0); }
    int num_states() const { return 1 << v(); }
    int num_inputs() const { return 1 << k; }
    int num_outputs() const { return 1 << n; }
    int tail_steps() const {
        return reg_lengths.empty() ? 0 : *std::max_element(reg_lengths.begin(), reg_lengths.end());
    }
};

enum class CodeStatus { valid, catastrophic, non_equiprobable };

inline const char* to_string(CodeStatus s) {
    switch (s) {
        case CodeStatus::valid: return "valid";
        case CodeStatus::catastrophic: return "catastrophic";
        case CodeStatus::non_equiprobable: return "non_equiprobable";
    }
    return "?";
}

inline void check_shape(const CodeSpec& c) {
    if (c.k < 1 || c.k > 4) throw std::invalid_argument("k must be in 1..4");
    if (c.n <= c.k || c.n > 6) throw std::invalid_argument("n must satisfy k < n <= 6");
    if (static_cast<int>(c.reg_lengths.size()) != c.k)
        throw std::invalid_argument("need one register length per input bit");
    for (int vi : c.reg_lengths)
        if (vi < 0 || vi > 12) throw std::invalid_argument("register length out of range");
    if (c.v() > 12) throw std::invalid_argument("total memory out of range");
    if (static_cast<int>(c.gen.size()) != c.k)
        throw std::invalid_argument("generator matrix must have k rows");
    for (int i = 0; i < c.k; ++i) {
        if (static_cast<int>(c.gen[i].size()) != c.n)
            throw std::invalid_argument("generator row must have n masks");
        for (uint32_t m : c.gen[i])
            if (m >> (c.reg_lengths[i] + 1))
                throw std::invalid_argument("tap mask exceeds register length");
    }
}

inline CodeSpec make_code(int k, int n, std::vector<int> reg_lengths,
                          std::vector<std::vector<uint32_t>> gen) {
    CodeSpec c{k, n, std::move(reg_lengths), std::move(gen)};
    check_shape(c);
    return c;
}

namespace detail {

inline int mask_degree(uint32_t m) { return m ? std::bit_width(m) - 1 : 0; }

inline std::vector<std::vector<uint32_t>> parse_octal_rows(std::string_view text) {
    std::vector<std::vector<uint32_t>> rows;
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip_ws();
    while (i < text.size()) {
        if (text[i] != '(') throw std::invalid_argument("expected '(' in generator text");
        ++i;
        std::vector<uint32_t> row;
        while (true) {
            skip_ws();
            if (i >= text.size()) throw std::invalid_argument("unterminated generator group");
            if (text[i] == ')') { ++i; break; }
            uint32_t val = 0;
            size_t start = i;
            while (i < text.size() && text[i] >= '0' && text[i] <= '7') {
                val = val * 8 + (text[i] - '0');
                if (val > 0xFFFFu) throw std::invalid_argument("tap mask too large");
                ++i;
            }
            if (i == start) throw std::invalid_argument("expected octal digit in generator text");
            row.push_back(val);
        }
        if (row.empty()) throw std::invalid_argument("empty generator group");
        rows.push_back(std::move(row));
        skip_ws();
    }
    if (rows.empty()) throw std::invalid_argument("no generator groups found");
    return rows;
}

}  // namespace detail

/// Parse "(g11 g12 ...)(g21 ...)" octal text. When reg_lengths is empty each
/// register length is taken from the highest tap degree in its row.
inline CodeSpec parse_generators(std::string_view text, int k, int n,
                                 std::vector<int> reg_lengths = {}) {
    auto rows = detail::parse_octal_rows(text);
    if (static_cast<int>(rows.size()) != k)
        throw std::invalid_argument("generator text has wrong number of rows");
    for (auto& r : rows)
        if (static_cast<int>(r.size()) != n)
            throw std::invalid_argument("generator row has wrong number of masks");
    if (reg_lengths.empty()) {
        reg_lengths.resize(k);
        for (int i = 0; i < k; ++i) {
            int d = 0;
            for (uint32_t m : rows[i]) d = std::max(d, detail::mask_degree(m));
            reg_lengths[i] = d;
        }
    }
    return make_code(k, n, std::move(reg_lengths), std::move(rows));
}

inline std::string format_generators(const CodeSpec& c) {
    std::string out;
    for (int i = 0; i < c.k; ++i) {
        out += '(';
        for (int j = 0; j < c.n; ++j) {
            if (j) out += ' ';
            uint32_t m = c.gen[i][j];
            std::string oct;
            do { oct += char('0' + (m & 7)); m >>= 3; } while (m);
            std::reverse(oct.begin(), oct.end());
            out += oct;
        }
        out += ')';
    }
    return out;
}

/// Same taps read in the opposite bit order within each register window.
inline CodeSpec reverse_tap_convention(const CodeSpec& c) {
    CodeSpec r = c;
    for (int i = 0; i < c.k; ++i) {
        int w = c.reg_lengths[i] + 1;
        for (int j = 0; j < c.n; ++j) {
            uint32_t m = c.gen[i][j], rev = 0;
            for (int b = 0; b < w; ++b)
                if (m >> b & 1) rev |= 1u << (w - 1 - b);
            r.gen[i][j] = rev;
        }
    }
    return r;
}

struct StepResult {
    uint32_t next;    // successor state
    uint32_t output;  // symbol index, output bit j at weight 2^j
};

/// One trellis transition. State packs the registers with register 0 in the
/// lowest bits; within a register the newest cell is lowest.
inline StepResult step(const CodeSpec& c, uint32_t state, uint32_t input) {
    uint32_t out = 0, next = 0;
    int offset = 0;
    for (int i = 0; i < c.k; ++i) {
        int vi = c.reg_lengths[i];
        uint32_t reg = (state >> offset) & ((1u << vi) - 1);
        uint32_t ext = (reg << 1) | ((input >> i) & 1u);
        for (int j = 0; j < c.n; ++j)
            out ^= static_cast<uint32_t>(std::popcount(c.gen[i][j] & ext) & 1) << j;
        next |= (ext & ((1u << vi) - 1)) << offset;
        offset += vi;
    }
    return {next, out};
}

/// Encode a bit stream, k bits per step, bit i of a step feeding register i.
/// terminate appends tail_steps() zero-input steps so the path ends in
/// state 0. Input size must be a multiple of k.
inline std::vector<uint32_t> encode(const CodeSpec& c, const std::vector<uint8_t>& bits,
                                    bool terminate) {
    if (bits.size() % c.k != 0)
        throw std::invalid_argument("bit count must be a multiple of k");
    size_t steps = bits.size() / c.k;
    std::vector<uint32_t> symbols;
    symbols.reserve(steps + (terminate ? c.tail_steps() : 0));
    uint32_t state = 0;
    for (size_t t = 0; t < steps; ++t) {
        uint32_t x = 0;
        for (int i = 0; i < c.k; ++i) x |= uint32_t(bits[t * c.k + i] & 1) << i;
        auto [next, out] = step(c, state, x);
        symbols.push_back(out);
        state = next;
    }
    if (terminate)
        for (int t = 0; t < c.tail_steps(); ++t) {
            auto [next, out] = step(c, state, 0);
            symbols.push_back(out);
            state = next;
        }
    return symbols;
}

/// A code is usable only when no input-weight can circulate without output
/// energy and every output symbol is equally likely over uniform inputs.
inline CodeStatus validate(const CodeSpec& c) {
    int S = c.num_states(), I = c.num_inputs();

    // Cycle in the zero-output transition graph, ignoring the all-zero
    // self-loop, means an unbounded input difference with bounded output
    // distance.
    std::vector<uint8_t> color(S, 0);  // 0 white, 1 on stack, 2 done
    std::vector<std::pair<uint32_t, uint32_t>> stack;  // (state, next input)
    for (int s0 = 0; s0 < S; ++s0) {
        if (color[s0]) continue;
        stack.push_back({uint32_t(s0), 0});
        color[s0] = 1;
        while (!stack.empty()) {
            auto& [s, x] = stack.back();
            if (x == uint32_t(I)) {
                color[s] = 2;
                stack.pop_back();
                continue;
            }
            uint32_t xi = x++;
            if (s == 0 && xi == 0) continue;
            auto [next, out] = step(c, s, xi);
            if (out != 0) continue;
            if (color[next] == 1) return CodeStatus::catastrophic;
            if (color[next] == 0) {
                color[next] = 1;
                stack.push_back({next, 0});
            }
        }
    }

    if (c.v() + c.k < c.n) return CodeStatus::non_equiprobable;
    std::vector<uint32_t> hist(c.num_outputs(), 0);
    for (int s = 0; s < S; ++s)
        for (int x = 0; x < I; ++x) hist[step(c, s, x).output]++;
    uint32_t want = uint32_t((size_t(S) * I) >> c.n);
    for (uint32_t h : hist)
        if (h != want) return CodeStatus::non_equiprobable;
    return CodeStatus::valid;
}

}  // namespace gtcm
