#pragma once

// All randomized generation draws from std::mt19937_64 seeded from a single
// 64-bit seed; independent streams are derived with SplitMix64.

#include <cstdint>
#include <limits>
#include <random>

namespace bramsey {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Seed for the stream-th independent generator derived from seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) { return Rng(derive_seed(seed, stream)); }

/// Uniform integer in [lo, hi] without relying on library distribution internals,
/// so reports stay identical across standard library implementations.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

/// True with probability p (53-bit resolution).
inline bool bernoulli(Rng& rng, double p) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return u < p;
}

}  // namespace bramsey
