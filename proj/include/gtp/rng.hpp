#pragma once

// Seeded randomness. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; conversions to doubles are done here rather
// than through std::*_distribution so streams match across toolchains.

#include <cmath>
#include <cstdint>
#include <random>

namespace gtp {

using Engine = std::mt19937_64;

/// splitmix64 finalizer; derives independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform on [-1, 1].
inline double uniform_pm1(Engine& rng) { return 2.0 * uniform01(rng) - 1.0; }

/// Standard normal by Box-Muller (one of the pair is discarded).
inline double standard_normal(Engine& rng)
{
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace gtp
