#pragma once

// Draws defined only in terms of raw mt19937_64 output, so a seed yields the
// same stream with every standard library.

#include <cstdint>
#include <random>

#include "tsnet/distances.hpp"

namespace tsnet::detail {

/// Uniform integer in [lo, hi] by rejection sampling.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo;
  if (span == UINT64_MAX) return rng();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t draw;
  do draw = rng();
  while (draw >= limit);
  return lo + draw % range;
}

/// Uniform on the open interval (0, 1) with 53 random bits.
inline double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal by inversion.
inline double standard_normal(std::mt19937_64& rng) { return normal_quantile(uniform_open(rng)); }

}  // namespace tsnet::detail
