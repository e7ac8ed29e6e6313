#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gtcm {

using cplx = std::complex<double>;

enum class ModName { bpsk, qpsk, psk8, qam16, qam64 };

inline const char* to_string(ModName m) {
    switch (m) {
        case ModName::bpsk: return "bpsk";
        case ModName::qpsk: return "qpsk";
        case ModName::psk8: return "8psk";
        case ModName::qam16: return "16qam";
        case ModName::qam64: return "64qam";
    }
    return "?";
}

inline ModName mod_from_string(std::string_view s) {
    if (s == "bpsk") return ModName::bpsk;
    if (s == "qpsk" || s == "4psk") return ModName::qpsk;
    if (s == "8psk" || s == "psk8") return ModName::psk8;
    if (s == "16qam" || s == "qam16") return ModName::qam16;
    if (s == "64qam" || s == "qam64") return ModName::qam64;
    throw std::invalid_argument("unknown modulation: " + std::string(s));
}

/// Constellation with unit average symbol energy and a cached pairwise
/// squared-distance table.
struct Modulation {
    ModName name;
    int bits_per_symbol = 0;
    std::vector<cplx> points;
    std::vector<double> ed2;  // order*order, row-major
    double min_sq_distance = 0.0;

    int order() const { return static_cast<int>(points.size()); }

    double sq_distance(int s, int t) const {
        int m = order();
        if (s < 0 || s >= m || t < 0 || t >= m)
            throw std::out_of_range("symbol index out of range");
        return ed2[static_cast<size_t>(s) * m + t];
    }
};

namespace detail {

inline std::vector<cplx> psk_points(int m) {
    std::vector<cplx> p(m);
    for (int s = 0; s < m; ++s) {
        double ph = 2.0 * M_PI * s / m;
        p[s] = {std::cos(ph), std::sin(ph)};
    }
    return p;
}

// Square grid on odd coordinates, low bits of the label on the real axis,
// high bits on the imaginary axis, label 0 at the most negative corner.
inline std::vector<cplx> qam_points(int m) {
    int side = static_cast<int>(std::lround(std::sqrt(double(m))));
    std::vector<cplx> p(m);
    double energy = 0.0;
    for (int s = 0; s < m; ++s) {
        int col = s % side;
        int row = s / side;
        cplx pt(2 * col - (side - 1), 2 * row - (side - 1));
        energy += std::norm(pt);
        p[s] = pt;
    }
    double scale = std::sqrt(energy / m);
    for (auto& pt : p) pt /= scale;
    return p;
}

}  // namespace detail

inline Modulation build(ModName name) {
    Modulation m;
    m.name = name;
    switch (name) {
        case ModName::bpsk:
            m.bits_per_symbol = 1;
            m.points = {cplx(1, 0), cplx(-1, 0)};
            break;
        case ModName::qpsk:
            m.bits_per_symbol = 2;
            m.points = detail::psk_points(4);
            break;
        case ModName::psk8:
            m.bits_per_symbol = 3;
            m.points = detail::psk_points(8);
            break;
        case ModName::qam16:
            m.bits_per_symbol = 4;
            m.points = detail::qam_points(16);
            break;
        case ModName::qam64:
            m.bits_per_symbol = 6;
            m.points = detail::qam_points(64);
            break;
    }
    int order = m.order();
    m.ed2.resize(static_cast<size_t>(order) * order);
    m.min_sq_distance = 1e300;
    for (int s = 0; s < order; ++s)
        for (int t = 0; t < order; ++t) {
            double d = std::norm(m.points[s] - m.points[t]);
            m.ed2[static_cast<size_t>(s) * order + t] = d;
            if (s != t && d < m.min_sq_distance) m.min_sq_distance = d;
        }
    return m;
}

inline double min_sq_distance(const Modulation& m) { return m.min_sq_distance; }

/// Source modulation implied by k input bits per step.
inline ModName source_mod_for_bits(int k) {
    switch (k) {
        case 1: return ModName::bpsk;
        case 2: return ModName::qpsk;
        case 3: return ModName::psk8;
        case 4: return ModName::qam16;
        case 6: return ModName::qam64;
    }
    throw std::invalid_argument("no source modulation with " + std::to_string(k) +
                                " bits per symbol");
}

/// Modulation carrying n coded bits per symbol.
inline ModName target_mod_for_bits(int n) { return source_mod_for_bits(n); }

}  // namespace gtcm
