#pragma once

#include <cstdint>
#include <random>

namespace ctlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for sample `index` of a run seeded with `seed`; independent of worker layout.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x51ED27));
}

// Uniform integer in [0, n) with a fixed algorithm, so streams agree across
// standard libraries (std::uniform_int_distribution is implementation-defined).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = n == 0 ? 0 : (~std::uint64_t{0} - n + 1) % n;
    for (;;) {
        const std::uint64_t x = rng();
        if (x >= limit) return x % n;
    }
}

}  // namespace ctlab
