#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ridge {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent per-task seeds from (seed, stream).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Index i drawn with probability (cumulative[i] - cumulative[i-1]) / total_mass.
/// Residual mass total_mass - cumulative.back() maps to cumulative.size().
inline std::size_t draw_categorical(std::span<const double> cumulative, double total_mass, Rng& rng) {
    const double u = uniform01(rng) * total_mass;
    std::size_t lo = 0;
    std::size_t hi = cumulative.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (u < cumulative[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

} // namespace ridge
