#pragma once

#include <cstdint>
#include <random>

namespace reflectbench {

// Portable draws on top of mt19937_64. The standard distributions are
// implementation-defined, so anything that must reproduce across toolchains
// goes through these.

inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection; n must be positive.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

}  // namespace reflectbench
