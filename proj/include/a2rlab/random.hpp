#pragma once

#include <cstdint>
#include <random>

namespace a2rlab {

// The standard distributions are implementation-defined, so reports built
// from them would differ between standard libraries. These helpers depend
// only on the mt19937_64 bit stream.

/// Uniform double in [0, 1) built from 53 random mantissa bits.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1, 1).
inline double uniform_symmetric(std::mt19937_64& gen) { return 2.0 * uniform01(gen) - 1.0; }

/// Uniform integer in [0, n); n > 0.
inline std::int64_t uniform_index(std::mt19937_64& gen, std::int64_t n) {
  const auto un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x = gen();
  while (x >= limit) x = gen();
  return static_cast<std::int64_t>(x % un);
}

}  // namespace a2rlab
