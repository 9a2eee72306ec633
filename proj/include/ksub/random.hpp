#pragma once

#include <cstdint>
#include <random>

namespace ksub::rnd {

// Unbiased draw in [0, bound). std::uniform_int_distribution is
// implementation-defined, so we roll our own on top of the fully specified
// mt19937_64 stream to keep seeded runs byte-identical everywhere.
inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

// Inclusive integer range.
inline long long range(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(below(rng, std::uint64_t(hi - lo + 1)));
}

// Uniform in [0, 1) with 53 random bits.
inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace ksub::rnd
