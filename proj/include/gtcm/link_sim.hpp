#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "gtcm/code.hpp"
#include "gtcm/constellation.hpp"
#include "gtcm/interleave.hpp"
#include "gtcm/viterbi.hpp"

namespace gtcm {

/// Portable Gaussian deviates: Box-Muller over mt19937_64, so streams are
/// identical across platforms and toolchains.
class GaussianSource {
  public:
    explicit GaussianSource(uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = 1.0 - unit(rng_());  // (0, 1], keeps log finite
        double u2 = unit(rng_());
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

    static double unit(uint64_t x) { return double(x >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 rng_;
    bool have_ = false;
    double spare_ = 0.0;
};

/// Decorrelated stream seed for (seed, stream) without overlapping the
/// generator's own sequence.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Complex AWGN at the given Es/N0 against unit-energy symbols.
inline void add_awgn(std::vector<cplx>& samples, double es_n0_db, GaussianSource& g) {
    double n0 = std::pow(10.0, -es_n0_db / 10.0);
    double sigma = std::sqrt(n0 / 2.0);
    for (auto& s : samples) s += cplx(sigma * g.next(), sigma * g.next());
}

inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace detail {

/// Exact bit error rate of Gray-labelled M-PAM with levels (2i - M + 1) * s
/// and t = s / sigma, by summing every cross-region decision probability.
inline double gray_pam_ber(int M, double t) {
    const double inf = std::numeric_limits<double>::infinity();
    int bits = 0;
    while ((1 << bits) < M) ++bits;
    double total = 0.0;
    for (int i = 0; i < M; ++i) {
        double li = double(2 * i - M + 1);
        for (int j = 0; j < M; ++j) {
            if (j == i) continue;
            int diff = (i ^ (i >> 1)) ^ (j ^ (j >> 1));
            int wrong = __builtin_popcount(unsigned(diff));
            if (!wrong) continue;
            double lo = j == 0 ? -inf : double(2 * j - M);
            double hi = j == M - 1 ? inf : double(2 * j - M + 2);
            total += wrong * (q_func((lo - li) * t) - q_func((hi - li) * t));
        }
    }
    return total / double(M * bits);
}

}  // namespace detail

/// Closed-form uncoded bit error rate over Gray labels. Exact for BPSK,
/// QPSK, and the square QAMs; nearest-neighbour approximation for 8-PSK.
inline double theoretical_uncoded_ber(ModName mod, double eb_n0_db) {
    double gb = std::pow(10.0, eb_n0_db / 10.0);
    switch (mod) {
        case ModName::bpsk:
        case ModName::qpsk:
            return q_func(std::sqrt(2.0 * gb));
        case ModName::psk8:
            return (2.0 / 3.0) * q_func(std::sqrt(6.0 * gb) * std::sin(M_PI / 8.0));
        case ModName::qam16:
            return detail::gray_pam_ber(4, std::sqrt(0.8 * gb));
        case ModName::qam64:
            return detail::gray_pam_ber(8, std::sqrt(2.0 / 7.0 * gb));
    }
    throw std::invalid_argument("unknown modulation");
}

/// Smallest Eb/N0 (dB) where the closed-form curve drops to target_ber.
inline double theoretical_crossing_db(ModName mod, double target_ber, double lo_db = -5.0,
                                      double hi_db = 40.0) {
    if (theoretical_uncoded_ber(mod, hi_db) > target_ber)
        throw std::invalid_argument("target rate not reached inside the bracket");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo_db + hi_db);
        if (theoretical_uncoded_ber(mod, mid) > target_ber)
            lo_db = mid;
        else
            hi_db = mid;
    }
    return 0.5 * (lo_db + hi_db);
}

namespace detail {

inline uint32_t binary_reflected_gray(uint32_t x) { return x ^ (x >> 1); }

}  // namespace detail

/// Same point set as build(name) but with Gray labels: any two decision
/// neighbours differ in exactly one bit. Used for plain uncoded links and
/// for reference schemes that pair a binary code with an off-the-shelf map.
inline Modulation gray_modulation(ModName name) {
    Modulation base = build(name);
    Modulation g = base;
    switch (name) {
        case ModName::bpsk:
            return g;
        case ModName::qpsk:
        case ModName::psk8:
            for (int ring = 0; ring < base.order(); ++ring)
                g.points[detail::binary_reflected_gray(uint32_t(ring))] = base.points[ring];
            break;
        case ModName::qam16:
        case ModName::qam64: {
            int side = base.order() == 16 ? 4 : 8;
            int axis_bits = side == 4 ? 2 : 3;
            for (int row = 0; row < side; ++row)
                for (int col = 0; col < side; ++col) {
                    uint32_t label = (detail::binary_reflected_gray(uint32_t(row)) << axis_bits) |
                                     detail::binary_reflected_gray(uint32_t(col));
                    g.points[label] = base.points[row * side + col];
                }
            break;
        }
    }
    int order = g.order();
    for (int s = 0; s < order; ++s)
        for (int t = 0; t < order; ++t)
            g.ed2[static_cast<size_t>(s) * order + t] = std::norm(g.points[s] - g.points[t]);
    return g;
}

namespace detail {

/// O(1) nearest-point decision, valid for the layouts produced by build()
/// and gray_modulation().
class HardDecider {
  public:
    explicit HardDecider(const Modulation& m) {
        switch (m.name) {
            case ModName::bpsk:
            case ModName::qpsk:
            case ModName::psk8: {
                ring_ = true;
                ring_size_ = m.order();
                label_of_pos_.resize(m.order());
                for (int lbl = 0; lbl < m.order(); ++lbl) {
                    double ph = std::arg(m.points[lbl]);
                    int pos = int(std::lround(ph / (2.0 * M_PI / m.order())));
                    pos = ((pos % m.order()) + m.order()) % m.order();
                    label_of_pos_[pos] = uint32_t(lbl);
                }
                break;
            }
            case ModName::qam16:
            case ModName::qam64: {
                ring_ = false;
                side_ = m.order() == 16 ? 4 : 8;
                scale_ = std::sqrt(m.order() == 16 ? 10.0 : 42.0);
                label_of_pos_.resize(m.order());
                for (int lbl = 0; lbl < m.order(); ++lbl) {
                    int col = int(std::lround((m.points[lbl].real() * scale_ + side_ - 1) / 2.0));
                    int row = int(std::lround((m.points[lbl].imag() * scale_ + side_ - 1) / 2.0));
                    label_of_pos_[row * side_ + col] = uint32_t(lbl);
                }
                break;
            }
        }
    }

    uint32_t decide(cplx r) const {
        if (ring_) {
            if (ring_size_ == 2) return r.real() >= 0.0 ? label_of_pos_[0] : label_of_pos_[1];
            int pos = int(std::lround(std::arg(r) / (2.0 * M_PI / ring_size_)));
            pos = ((pos % ring_size_) + ring_size_) % ring_size_;
            return label_of_pos_[pos];
        }
        auto axis = [&](double val) {
            int idx = int(std::lround((val * scale_ + side_ - 1) / 2.0));
            return std::min(std::max(idx, 0), side_ - 1);
        };
        return label_of_pos_[axis(r.imag()) * side_ + axis(r.real())];
    }

  private:
    bool ring_ = true;
    int ring_size_ = 2;
    int side_ = 2;
    double scale_ = 1.0;
    std::vector<uint32_t> label_of_pos_;
};

}  // namespace detail

struct SweepPoint {
    double eb_n0_db = 0.0;
    uint64_t bits = 0;
    uint64_t errors = 0;
    double ber = 0.0;
};

struct UncodedSweepSpec {
    ModName mod = ModName::qpsk;
    double start_db = 0.0;
    double stop_db = 10.0;
    double step_db = 0.5;
    uint64_t max_bits = 10000000;
    uint64_t target_errors = 1000;
    uint64_t seed = 1;
};

/// Gray-labelled uncoded reference link: random bits, hard decisions.
inline std::vector<SweepPoint> run_uncoded_sweep(const UncodedSweepSpec& spec) {
    Modulation mod = gray_modulation(spec.mod);
    detail::HardDecider decider(mod);
    const int b = mod.bits_per_symbol;
    std::vector<SweepPoint> points;
    int index = 0;
    for (double db = spec.start_db; db <= spec.stop_db + 1e-9; db += spec.step_db, ++index) {
        GaussianSource noise(mix_seed(spec.seed, uint64_t(2 * index)));
        std::mt19937_64 data(mix_seed(spec.seed, uint64_t(2 * index + 1)));
        double es_n0_db = db + 10.0 * std::log10(double(b));
        SweepPoint pt;
        pt.eb_n0_db = db;
        const size_t chunk = 32768;
        std::vector<uint32_t> tx(chunk);
        std::vector<cplx> ch(chunk);
        while (pt.errors < spec.target_errors && pt.bits < spec.max_bits) {
            size_t syms = std::min(chunk, size_t((spec.max_bits - pt.bits) / b) + 1);
            for (size_t i = 0; i < syms; ++i) {
                tx[i] = uint32_t(data()) & (mod.order() - 1u);
                ch[i] = mod.points[tx[i]];
            }
            ch.resize(syms);
            add_awgn(ch, es_n0_db, noise);
            for (size_t i = 0; i < syms; ++i) {
                uint32_t rx = decider.decide(ch[i]);
                pt.errors += uint64_t(std::popcount(tx[i] ^ rx));
            }
            pt.bits += uint64_t(syms) * b;
            ch.resize(chunk);
        }
        pt.ber = double(pt.errors) / double(pt.bits);
        points.push_back(pt);
    }
    return points;
}

struct CodedSweepSpec {
    CodeSpec code;
    ModName target = ModName::qpsk;
    const Modulation* target_mod = nullptr;  // overrides target labels when set
    double start_db = 0.0;
    double stop_db = 10.0;
    double step_db = 0.5;
    uint64_t max_bits = 10000000;
    uint64_t target_errors = 1000;
    uint64_t seed = 1;
    size_t block_steps = 8192;  // info steps per terminated block
    bool interleave = false;    // keyed symbol interleaving across the channel
    Bytes key;
    uint64_t block_size = 251;  // interleaver block, prime
};

/// Coded link: terminated blocks, soft Viterbi decoding, and exact energy
/// accounting. Eb counts the termination overhead, so
/// Es/N0 = Eb/N0 * (k * steps) / (steps + tail).
inline std::vector<SweepPoint> run_coded_sweep(const CodedSweepSpec& spec) {
    Modulation owned = build(spec.target);
    const Modulation& mod = spec.target_mod ? *spec.target_mod : owned;
    if (mod.order() != spec.code.num_outputs())
        throw std::invalid_argument("target constellation order must be 2^n");
    const int k = spec.code.k;
    const size_t steps = spec.block_steps;
    const size_t tail = size_t(spec.code.tail_steps());
    const double rate_factor = double(k) * double(steps) / double(steps + tail);

    std::vector<SweepPoint> points;
    int index = 0;
    for (double db = spec.start_db; db <= spec.stop_db + 1e-9; db += spec.step_db, ++index) {
        GaussianSource noise(mix_seed(spec.seed, uint64_t(2 * index)));
        std::mt19937_64 data(mix_seed(spec.seed, uint64_t(2 * index + 1)));
        double es_n0_db = db + 10.0 * std::log10(rate_factor);
        SweepPoint pt;
        pt.eb_n0_db = db;
        uint64_t block_counter = 0;
        std::vector<uint8_t> bits(steps * size_t(k));
        while (pt.errors < spec.target_errors && pt.bits < spec.max_bits) {
            for (auto& b : bits) b = data() & 1;
            auto symbols = encode(spec.code, bits, true);
            std::vector<cplx> ch(symbols.size());
            for (size_t i = 0; i < symbols.size(); ++i) ch[i] = mod.points[symbols[i]];

            if (spec.interleave) {
                size_t blocks = (ch.size() + spec.block_size - 1) / spec.block_size;
                ch.resize(blocks * spec.block_size);
                for (size_t i = symbols.size(); i < ch.size(); ++i)
                    ch[i] = mod.points[uint32_t(data()) & (mod.order() - 1u)];
                std::vector<cplx> shuffled;
                shuffled.reserve(ch.size());
                for (size_t blk = 0; blk < blocks; ++blk) {
                    auto p = derive_permutation(spec.key, block_counter, blk, spec.block_size);
                    std::vector<cplx> piece(ch.begin() + blk * spec.block_size,
                                            ch.begin() + (blk + 1) * spec.block_size);
                    auto out = permute(p, piece);
                    shuffled.insert(shuffled.end(), out.begin(), out.end());
                }
                add_awgn(shuffled, es_n0_db, noise);
                std::vector<cplx> restored;
                restored.reserve(shuffled.size());
                for (size_t blk = 0; blk < blocks; ++blk) {
                    auto p = derive_permutation(spec.key, block_counter, blk, spec.block_size);
                    std::vector<cplx> piece(shuffled.begin() + blk * spec.block_size,
                                            shuffled.begin() + (blk + 1) * spec.block_size);
                    auto out = inverse_permute(p, piece);
                    restored.insert(restored.end(), out.begin(), out.end());
                }
                restored.resize(symbols.size());
                ch.swap(restored);
            } else {
                add_awgn(ch, es_n0_db, noise);
            }

            auto decoded = decode(spec.code, mod, ch, true);
            for (size_t i = 0; i < bits.size(); ++i) pt.errors += uint64_t(bits[i] != decoded[i]);
            pt.bits += bits.size();
            ++block_counter;
        }
        pt.ber = double(pt.errors) / double(pt.bits);
        points.push_back(pt);
    }
    return points;
}

inline void write_sweep_csv(std::ostream& os, const std::string& scenario,
                            const std::vector<SweepPoint>& points) {
    os << "scenario,eb_n0_db,bits,errors,ber\n";
    char buf[96];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%s,%.2f,%llu,%llu,%.6e\n", scenario.c_str(), p.eb_n0_db,
                      (unsigned long long)p.bits, (unsigned long long)p.errors, p.ber);
        os << buf;
    }
}

}  // namespace gtcm
