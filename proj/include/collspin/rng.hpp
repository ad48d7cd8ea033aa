// rng.hpp — Splittable seeding and a deterministic uniform generator
//
// Child seeds are derived from (master seed, trajectory index) with the
// splitmix64 output function, so an ensemble partitions into independent
// streams that do not depend on thread count or execution order.

#pragma once

#include <cstdint>
#include <random>

namespace collspin {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed for trajectory `index` under `master`. Equivalent to the
// (index+1)-th output of a splitmix64 stream started at `master`.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + index * 0x9E3779B97F4A7C15ULL);
}

// Uniform double in [0, 1) with 53 random bits. Avoids
// std::uniform_real_distribution, whose output is not pinned by the
// standard; this mapping is reproducible on any conforming platform.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace collspin
