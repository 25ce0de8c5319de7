#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace mcu {

/// mt19937_64 output is fixed by the standard; the distributions are not, so
/// everything that must replay across toolchains draws through these helpers.
using Rng = std::mt19937_64;

/// Uniform index in [0, n) by rejection sampling. n must be > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Stable 64-bit FNV-1a, used to derive per-item seeds from text.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace mcu
