#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtcm/catalog.hpp"
#include "gtcm/code.hpp"
#include "gtcm/constellation.hpp"
#include "gtcm/crypto.hpp"
#include "gtcm/interleave.hpp"
#include "gtcm/viterbi.hpp"

namespace gtcm {

/// Public synchronization word, sent as 64 antipodal samples.
constexpr uint64_t kPreambleWord = 0x1ACFFC1D1ACFFC1Dull;

/// Public convolutional code protecting the header section.
inline const CodeSpec& header_code() {
    static const CodeSpec c = parse_generators("(7 5)", 1, 2);
    return c;
}

struct FrameHeader {
    uint8_t mcs_id = 0;       // index into the code catalog
    uint32_t seq = 0;         // packet number, feeds the interleaver
    uint16_t payload_len = 0; // payload length in bits
    uint64_t r = 0;           // per-packet freshness value
};

class FrameError : public std::runtime_error {
  public:
    enum class Kind { preamble_not_found, auth_failure, unknown_mcs, bad_length };

    FrameError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

namespace detail {

inline std::array<uint8_t, 16> subkey(const Bytes& key, const char* label) {
    Bytes msg(key);
    for (const char* p = label; *p; ++p) msg.push_back(uint8_t(*p));
    auto digest = sha256(msg);
    std::array<uint8_t, 16> out;
    std::copy(digest.begin(), digest.begin() + 16, out.begin());
    return out;
}

inline std::vector<uint8_t> bytes_to_bits_msb(const uint8_t* data, size_t len) {
    std::vector<uint8_t> bits;
    bits.reserve(len * 8);
    for (size_t i = 0; i < len; ++i)
        for (int b = 7; b >= 0; --b) bits.push_back(data[i] >> b & 1);
    return bits;
}

inline Bytes bits_to_bytes_msb(const std::vector<uint8_t>& bits) {
    Bytes out((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i] & 1) out[i / 8] |= uint8_t(0x80 >> (i % 8));
    return out;
}

inline std::array<uint8_t, 16> pack_header(const FrameHeader& h) {
    std::array<uint8_t, 16> p{};
    p[0] = h.mcs_id;
    for (int i = 0; i < 4; ++i) p[1 + i] = uint8_t(h.seq >> (8 * (3 - i)));
    for (int i = 0; i < 2; ++i) p[5 + i] = uint8_t(h.payload_len >> (8 * (1 - i)));
    for (int i = 0; i < 8; ++i) p[7 + i] = uint8_t(h.r >> (8 * (7 - i)));
    return p;  // p[15] stays zero
}

inline FrameHeader unpack_header(const std::array<uint8_t, 16>& p) {
    FrameHeader h;
    h.mcs_id = p[0];
    for (int i = 0; i < 4; ++i) h.seq = (h.seq << 8) | p[1 + i];
    for (int i = 0; i < 2; ++i) h.payload_len = uint16_t((h.payload_len << 8) | p[5 + i]);
    for (int i = 0; i < 8; ++i) h.r = (h.r << 8) | p[7 + i];
    return h;
}

}  // namespace detail

struct Frame {
    FrameHeader header;  // sender-side copy of the protected fields
    ModName target = ModName::qpsk;
    uint64_t block_size = 251;
    std::vector<uint8_t> preamble_bits;   // 64 antipodal bits
    std::vector<uint8_t> header_bits;     // coded header section
    std::vector<uint32_t> payload_symbols;

    std::vector<cplx> samples() const {
        Modulation mod = build(target);
        std::vector<cplx> out;
        out.reserve(preamble_bits.size() + header_bits.size() + payload_symbols.size());
        for (uint8_t b : preamble_bits) out.push_back(cplx(b ? -1.0 : 1.0, 0.0));
        for (uint8_t b : header_bits) out.push_back(cplx(b ? -1.0 : 1.0, 0.0));
        for (uint32_t s : payload_symbols) out.push_back(mod.points[s]);
        return out;
    }
};

/// Assemble one frame: encrypted and authenticated header on the public
/// antipodal code, payload on the catalog code for mcs_id, keyed
/// per-block symbol interleaving, random tail padding to a whole number of
/// blocks. pad_rng drives only the padding symbols.
inline Frame build_frame(const Bytes& key, uint8_t mcs_id, uint32_t seq, uint64_t r,
                         const std::vector<uint8_t>& payload_bits,
                         const std::vector<CatalogEntry>& catalog, uint64_t block_size,
                         std::mt19937_64& pad_rng) {
    if (mcs_id >= catalog.size())
        throw FrameError(FrameError::Kind::unknown_mcs, "mcs_id outside the catalog");
    if (payload_bits.size() > 0xFFFF)
        throw FrameError(FrameError::Kind::bad_length, "payload too long for the header field");
    if (!is_prime(block_size))
        throw std::invalid_argument("block size must be prime");

    const CatalogEntry& entry = catalog[mcs_id];
    CodeSpec code = code_from_entry(entry);
    Modulation target = build(entry.target);

    Frame f;
    f.header = {mcs_id, seq, uint16_t(payload_bits.size()), r};
    f.target = entry.target;
    f.block_size = block_size;

    for (int b = 63; b >= 0; --b) f.preamble_bits.push_back(uint8_t(kPreambleWord >> b & 1));

    auto plain = detail::pack_header(f.header);
    auto cipher = aes128_encrypt_block(detail::subkey(key, "hdr-enc"), plain);
    auto mac_key = detail::subkey(key, "hdr-mac");
    auto tag = hmac_sha256(Bytes(mac_key.begin(), mac_key.end()), cipher.data(), cipher.size());
    Bytes wire(cipher.begin(), cipher.end());
    wire.insert(wire.end(), tag.begin(), tag.begin() + 8);
    auto header_bits = detail::bytes_to_bits_msb(wire.data(), wire.size());
    auto coded = encode(header_code(), header_bits, true);
    for (uint32_t y : coded)
        for (int j = 0; j < header_code().n; ++j) f.header_bits.push_back(uint8_t(y >> j & 1));

    std::vector<uint8_t> padded(payload_bits);
    while (padded.size() % code.k) padded.push_back(0);
    f.payload_symbols = encode(code, padded, true);
    size_t blocks = (f.payload_symbols.size() + block_size - 1) / block_size;
    if (blocks == 0) blocks = 1;
    while (f.payload_symbols.size() < blocks * block_size)
        f.payload_symbols.push_back(uint32_t(pad_rng()) & uint32_t(target.order() - 1));

    std::vector<uint32_t> shuffled;
    shuffled.reserve(f.payload_symbols.size());
    for (size_t blk = 0; blk < blocks; ++blk) {
        auto p = derive_permutation(key, seq, blk, block_size);
        std::vector<uint32_t> piece(f.payload_symbols.begin() + blk * block_size,
                                    f.payload_symbols.begin() + (blk + 1) * block_size);
        auto out = permute(p, piece);
        shuffled.insert(shuffled.end(), out.begin(), out.end());
    }
    f.payload_symbols.swap(shuffled);
    return f;
}

struct ParsedFrame {
    FrameHeader header;
    std::vector<uint8_t> payload_bits;
    size_t preamble_offset = 0;
};

/// Recover one frame from received samples: locate the preamble by exact
/// hard-decision match, decode and authenticate the header, then
/// de-interleave and decode the payload with the code the header names.
inline ParsedFrame parse_frame(const Bytes& key, const std::vector<cplx>& samples,
                               const std::vector<CatalogEntry>& catalog,
                               uint64_t block_size) {
    const size_t header_samples = (192 / header_code().k + header_code().tail_steps()) *
                                  size_t(header_code().n);
    size_t offset = samples.size();
    for (size_t at = 0; at + 64 + header_samples <= samples.size(); ++at) {
        bool match = true;
        for (int b = 0; b < 64 && match; ++b) {
            uint8_t bit = samples[at + b].real() < 0.0 ? 1 : 0;
            match = bit == uint8_t(kPreambleWord >> (63 - b) & 1);
        }
        if (match) {
            offset = at;
            break;
        }
    }
    if (offset == samples.size())
        throw FrameError(FrameError::Kind::preamble_not_found, "preamble not found");

    std::vector<cplx> hdr(samples.begin() + offset + 64,
                          samples.begin() + offset + 64 + header_samples);
    auto header_bits = decode_bpsk_stream(header_code(), hdr, true);
    Bytes wire = detail::bits_to_bytes_msb(header_bits);
    std::array<uint8_t, 16> cipher;
    std::copy(wire.begin(), wire.begin() + 16, cipher.begin());
    auto mac_key = detail::subkey(key, "hdr-mac");
    auto tag = hmac_sha256(Bytes(mac_key.begin(), mac_key.end()), cipher.data(), cipher.size());
    if (!std::equal(tag.begin(), tag.begin() + 8, wire.begin() + 16))
        throw FrameError(FrameError::Kind::auth_failure, "header authentication failed");
    auto plain = aes128_decrypt_block(detail::subkey(key, "hdr-enc"), cipher);
    if (plain[15] != 0)
        throw FrameError(FrameError::Kind::auth_failure, "header padding corrupted");

    ParsedFrame out;
    out.preamble_offset = offset;
    out.header = detail::unpack_header(plain);
    if (out.header.mcs_id >= catalog.size())
        throw FrameError(FrameError::Kind::unknown_mcs, "header names an unknown code");

    const CatalogEntry& entry = catalog[out.header.mcs_id];
    CodeSpec code = code_from_entry(entry);
    Modulation target = build(entry.target);

    size_t steps = (out.header.payload_len + code.k - 1) / size_t(code.k);
    size_t enc = steps + size_t(code.tail_steps());
    size_t blocks = (enc + block_size - 1) / block_size;
    if (blocks == 0) blocks = 1;
    size_t payload_at = offset + 64 + header_samples;
    if (payload_at + blocks * block_size > samples.size())
        throw FrameError(FrameError::Kind::bad_length, "payload section truncated");

    std::vector<cplx> payload;
    payload.reserve(blocks * block_size);
    for (size_t blk = 0; blk < blocks; ++blk) {
        auto p = derive_permutation(key, out.header.seq, blk, block_size);
        std::vector<cplx> piece(samples.begin() + payload_at + blk * block_size,
                                samples.begin() + payload_at + (blk + 1) * block_size);
        auto restored = inverse_permute(p, piece);
        payload.insert(payload.end(), restored.begin(), restored.end());
    }
    payload.resize(enc);
    auto bits = decode(code, target, payload, true);
    bits.resize(out.header.payload_len);
    out.payload_bits = std::move(bits);
    return out;
}

/// Compact wire form: counts and symbol indices, hex encoded.
inline std::string frame_to_hex(const Frame& f) {
    Bytes out;
    out.push_back('G');
    out.push_back('F');
    out.push_back(1);
    out.push_back(uint8_t(build(f.target).bits_per_symbol));
    out.push_back(uint8_t(f.block_size >> 8));
    out.push_back(uint8_t(f.block_size));
    uint32_t np = uint32_t(f.payload_symbols.size());
    for (int i = 3; i >= 0; --i) out.push_back(uint8_t(np >> (8 * i)));
    Bytes pre = detail::bits_to_bytes_msb(f.preamble_bits);
    out.insert(out.end(), pre.begin(), pre.end());
    uint16_t nh = uint16_t(f.header_bits.size());
    out.push_back(uint8_t(nh >> 8));
    out.push_back(uint8_t(nh));
    Bytes hdr = detail::bits_to_bytes_msb(f.header_bits);
    out.insert(out.end(), hdr.begin(), hdr.end());
    for (uint32_t s : f.payload_symbols) out.push_back(uint8_t(s));
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve(out.size() * 2);
    for (uint8_t b : out) {
        hex.push_back(digits[b >> 4]);
        hex.push_back(digits[b & 15]);
    }
    return hex;
}

inline Frame frame_from_hex(const std::string& hex) {
    if (hex.size() % 2) throw std::invalid_argument("odd hex length");
    Bytes raw;
    raw.reserve(hex.size() / 2);
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("bad hex digit");
    };
    for (size_t i = 0; i < hex.size(); i += 2)
        raw.push_back(uint8_t(nibble(hex[i]) << 4 | nibble(hex[i + 1])));

    size_t at = 0;
    auto need = [&](size_t n) {
        if (at + n > raw.size()) throw std::invalid_argument("truncated frame dump");
    };
    need(10);
    if (raw[0] != 'G' || raw[1] != 'F' || raw[2] != 1)
        throw std::invalid_argument("not a frame dump");
    Frame f;
    f.target = target_mod_for_bits(raw[3]);
    f.block_size = uint64_t(raw[4]) << 8 | raw[5];
    uint32_t np = 0;
    for (int i = 0; i < 4; ++i) np = np << 8 | raw[6 + i];
    at = 10;
    need(8);
    auto pre = detail::bytes_to_bits_msb(&raw[at], 8);
    f.preamble_bits.assign(pre.begin(), pre.end());
    at += 8;
    need(2);
    uint16_t nh = uint16_t(raw[at] << 8 | raw[at + 1]);
    at += 2;
    size_t hdr_bytes = (size_t(nh) + 7) / 8;
    need(hdr_bytes);
    auto hdr = detail::bytes_to_bits_msb(&raw[at], hdr_bytes);
    f.header_bits.assign(hdr.begin(), hdr.begin() + nh);
    at += hdr_bytes;
    need(np);
    int order = build(f.target).order();
    for (uint32_t i = 0; i < np; ++i) {
        if (raw[at + i] >= order) throw std::invalid_argument("symbol index out of range");
        f.payload_symbols.push_back(raw[at + i]);
    }
    return f;
}

}  // namespace gtcm
