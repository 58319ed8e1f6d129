#pragma once

#include <cstdint>
#include <random>

namespace vfield {

// SplitMix64 finalizer. Used to derive independent seed streams from a base
// seed; the mixing constants are the standard SplitMix64 ones.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic seed for the `stream`-th sub-stream of `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return mix64(base + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

// Uniform integer in [0, n) by rejection sampling on 32-bit draws, so the
// result depends only on the engine's output sequence (stdlib distributions
// are not portable across implementations).
inline std::uint32_t bounded_uniform(std::mt19937_64& rng, std::uint32_t n) {
    const std::uint64_t limit = (0x100000000ull / n) * n;
    for (;;) {
        const std::uint64_t v = rng() & 0xFFFFFFFFull;
        if (v < limit) return static_cast<std::uint32_t>(v % n);
    }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace vfield
