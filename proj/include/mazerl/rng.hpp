#pragma once
// Portable random draws. std::mt19937_64 has a standardized output sequence,
// but the std distributions do not, so the mappings to [0,1) and to small
// integer ranges are fixed here.

#include <cstdint>
#include <random>

namespace mazerl {

using Rng = std::mt19937_64;

/// Top 53 bits scaled to [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by modulo reduction. The bias is at most
/// bound / 2^64, negligible for the tiny bounds used here.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  return rng() % bound;
}

}  // namespace mazerl
