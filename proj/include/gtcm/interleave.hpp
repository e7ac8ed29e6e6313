#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gtcm/crypto.hpp"

namespace gtcm {

namespace detail {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t((unsigned __int128)a * b % m);
}

inline uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline uint64_t invmod(uint64_t a, uint64_t m) {
    // extended Euclid; a and m must be coprime
    int64_t t = 0, nt = 1;
    int64_t r = int64_t(m), nr = int64_t(a % m);
    while (nr != 0) {
        int64_t q = r / nr;
        int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw std::invalid_argument("no modular inverse");
    return uint64_t(t < 0 ? t + int64_t(m) : t);
}

// big-endian digest folded into [0, m)
inline uint64_t digest_mod(const std::array<uint8_t, 32>& h, uint64_t m) {
    unsigned __int128 r = 0;
    for (uint8_t byte : h) r = ((r << 8) | byte) % m;
    return uint64_t(r);
}

inline void store_be64(Bytes& out, uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

}  // namespace detail

/// Deterministic Miller-Rabin, exact for 64-bit inputs.
inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

/// x -> (a x + b) mod m over index domain [0, m), m prime so every a in
/// [1, m) is invertible and the map is a bijection.
struct LinearPermutation {
    uint64_t a = 1, b = 0, m = 2, a_inv = 1;

    size_t map(size_t x) const {
        return size_t((detail::mulmod(a, uint64_t(x), m) + b) % m);
    }
    size_t inverse_map(size_t y) const {
        uint64_t shifted = (uint64_t(y) + m - b) % m;
        return size_t(detail::mulmod(a_inv, shifted, m));
    }
};

inline LinearPermutation make_permutation(uint64_t a, uint64_t b, uint64_t m) {
    if (m > (uint64_t(1) << 31)) throw std::invalid_argument("block size too large");
    if (!is_prime(m)) throw std::invalid_argument("block size must be prime");
    if (a < 1 || a >= m) throw std::invalid_argument("multiplier out of range");
    if (b >= m) throw std::invalid_argument("offset out of range");
    return {a, b, m, detail::invmod(a, m)};
}

/// Keyed coefficients for one block: two domain-separated digests of
/// (key, packet_number, block_index), folded modulo the coefficient range.
inline LinearPermutation derive_permutation(const Bytes& key, uint64_t packet_number,
                                            uint64_t block_index, uint64_t m) {
    if (!is_prime(m)) throw std::invalid_argument("block size must be prime");
    Bytes msg(key);
    detail::store_be64(msg, packet_number);
    detail::store_be64(msg, block_index);
    msg.push_back(0x00);
    uint64_t a = detail::digest_mod(sha256(msg), m - 1) + 1;
    msg.back() = 0x01;
    uint64_t b = detail::digest_mod(sha256(msg), m);
    return make_permutation(a, b, m);
}

template <class T>
std::vector<T> permute(const LinearPermutation& p, const std::vector<T>& in) {
    if (in.size() != p.m) throw std::invalid_argument("block size mismatch");
    std::vector<T> out(in.size());
    for (size_t x = 0; x < in.size(); ++x) out[x] = in[p.map(x)];
    return out;
}

template <class T>
std::vector<T> inverse_permute(const LinearPermutation& p, const std::vector<T>& in) {
    if (in.size() != p.m) throw std::invalid_argument("block size mismatch");
    std::vector<T> out(in.size());
    for (size_t y = 0; y < in.size(); ++y) out[y] = in[p.inverse_map(y)];
    return out;
}

}  // namespace gtcm
