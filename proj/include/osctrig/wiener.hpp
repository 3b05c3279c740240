#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace osctrig {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream key for (seed, sample_index): samples are independent and
// order-insensitive regardless of generation order.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t sample_index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = sample_index ^ 0xD1B54A32D192ED03ULL;
    std::uint64_t b = splitmix64(s);
    s = a ^ (b + 0x8CB92BA72F3D8DD7ULL);
    return splitmix64(s);
}

inline double to_unit_open(std::uint64_t u) {
    // (0, 1): offset by half an ulp of the 53-bit grid so log() is safe
    return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

/// Fine-grid Brownian increments, regenerable bit-for-bit from
/// (seed, sample_index, n_fine, t_end). Gaussians come from a Box-Muller
/// transform of a splitmix64 uniform stream keyed per sample.
struct WienerPath {
    double t_end = 1.0;
    std::size_t n_fine = 1;
    std::uint64_t seed = 0;
    std::uint64_t sample_index = 0;
    std::vector<double> increments;
};

inline WienerPath generate_path(std::uint64_t seed, std::uint64_t sample_index,
                                std::size_t n_fine, double t_end) {
    if (n_fine == 0 || (n_fine & (n_fine - 1)) != 0)
        throw std::invalid_argument("generate_path: n_fine must be a power of two");
    if (!(t_end > 0.0)) throw std::invalid_argument("generate_path: t_end must be positive");

    WienerPath p;
    p.t_end = t_end;
    p.n_fine = n_fine;
    p.seed = seed;
    p.sample_index = sample_index;
    p.increments.resize(n_fine);

    const double sd = std::sqrt(t_end / static_cast<double>(n_fine));
    std::uint64_t state = detail::stream_key(seed, sample_index);
    for (std::size_t i = 0; i < n_fine; i += 2) {
        const double u1 = detail::to_unit_open(detail::splitmix64(state));
        const double u2 = detail::to_unit_open(detail::splitmix64(state));
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        p.increments[i] = sd * r * std::cos(phi);
        if (i + 1 < n_fine) p.increments[i + 1] = sd * r * std::sin(phi);
    }
    return p;
}

/// Sum groups of `factor` consecutive fine increments; coarse increment j is
/// exactly W(t_{j+1}) - W(t_j) on the coarse grid.
inline std::vector<double> coarsen(const WienerPath& path, std::size_t factor) {
    if (factor == 0 || path.n_fine % factor != 0)
        throw std::invalid_argument("coarsen: factor must divide n_fine");
    const std::size_t n = path.n_fine / factor;
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < factor; ++i) out[j] += path.increments[j * factor + i];
    return out;
}

}  // namespace osctrig
