// Seeded random streams.
//
// Draw number t of a run with seed s belongs to chunk c = t / kChunkSize.
// Chunk c uses std::mt19937_64 seeded by std::seed_seq{lo(s), hi(s), lo(c), hi(c)}.
// Both are fully specified by the standard, so output depends only on (seed, draw
// index) and not on the platform or on how chunks are spread across threads.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <random>

namespace binexp {

inline constexpr std::size_t kChunkSize = 1024;

/// Seed used when none is given.
inline constexpr std::uint64_t kDefaultSeed = 24301;

inline std::mt19937_64 chunk_stream(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

/// Uniform on [0,1) with 53 random bits.
inline double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// P(result = j) = 2^-j exactly, j >= 1: one plus the trailing zeros of a random bit stream.
inline std::uint32_t geometric_half(std::mt19937_64 &rng) {
    std::uint32_t d = 1;
    while (true) {
        const std::uint64_t word = rng();
        if (word != 0) {
            return d + static_cast<std::uint32_t>(std::countr_zero(word));
        }
        d += 64;
    }
}

} // namespace binexp
