#pragma once

#include <cstdint>
#include <random>

namespace seqalloc {

/// Engine used for every random stream in the library.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer applied to `master + (index + 1) * 0x9E3779B97F4A7C15`.
///
/// Replication `i` of a harness run seeds its own `Rng` with
/// `derive_seed(master, i)`, so results are bound to the replication index and
/// not to the order in which workers pick them up.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform on [0, 1) from the top 53 bits of one engine output.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal by Box-Muller. Always consumes exactly two engine outputs;
/// the sine branch is discarded so that each call is self-contained.
double standard_normal(Rng& rng);

/// Uniform index in [0, n) from one engine output: floor(uniform01 * n).
std::size_t uniform_index(Rng& rng, std::size_t n);

}  // namespace seqalloc
