#pragma once

#include <cstdint>

#include <cmath>

namespace momnoise::rng {

/// SplitMix64 finalizer: a bijective 64-bit mix with full avalanche.
inline std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

/// Stateless stream key for one (trial, mode) pair. Every sample of the
/// stream is mix(key + counter * gamma), i.e. SplitMix64 evaluated at a
/// fixed index, so any (trial, mode, step) triple maps to the same value
/// no matter how the simulation is sliced or parallelized.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial, std::uint64_t mode) {
    std::uint64_t k = mix(seed + kGamma);
    k = mix(k ^ (trial + 0xd1b54a32d192ed03ULL));
    k = mix(k ^ (mode + 0x8cb92ba72f3d8dd7ULL));
    return k;
}

/// Uniform double in (0, 1] built from the top 53 bits of one mix output.
inline double unit(std::uint64_t key, std::uint64_t counter) {
    const std::uint64_t bits = mix(key + (counter + 1) * kGamma);
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal via the Box-Muller transform of two counter-indexed
/// uniforms: z = sqrt(-2 ln u1) cos(2 pi u2).
inline double normal(std::uint64_t key, std::uint64_t step) {
    const double u1 = unit(key, 2 * step);
    const double u2 = unit(key, 2 * step + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace momnoise::rng
