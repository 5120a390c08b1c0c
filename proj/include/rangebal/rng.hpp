#pragma once

#include <cstdint>
#include <random>

namespace rangebal {

// Unbiased draw in [0, bound) by rejection. std::uniform_int_distribution is
// implementation-defined, so it has no place in a reproducible trace.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

// 53-bit draw in [0, 1).
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace rangebal
