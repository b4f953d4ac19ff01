#pragma once

#include <cstdint>
#include <random>

namespace kgaudit {

// splitmix64; used both as a mixer for seed derivation and to seed mt19937_64.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Counter-based sub-seed scheme: every consumer of randomness derives its own
// stream from (master, stream, counter). Documented in run manifests.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t counter = 0) {
    return mix64(mix64(master ^ mix64(stream)) ^ counter);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

// Unbiased uniform draw from [0, n). Hand-rolled so that results are
// identical across standard library implementations.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

// Uniform double in [0, 1).
inline double uniform_real(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform_real(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_real(rng);
}

}  // namespace kgaudit
