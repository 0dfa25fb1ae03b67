#pragma once

#include <cstdint>
#include <string_view>

namespace reflectbench {

// 64-bit FNV-1a. Stable across platforms and runs; used for request hashes,
// mock reply selection and file digests, never for security.
constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = kFnvOffsetBasis) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace reflectbench
