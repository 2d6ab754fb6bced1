#pragma once

#include <cstdint>
#include <random>

namespace fluctuant {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-stream generator derived from (master_seed, index). Streams are independent
// of execution order, which keeps multi-threaded ensembles bitwise reproducible.
inline std::mt19937_64 stream_rng(std::uint64_t master_seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(master_seed ^ splitmix64(index)));
}

}  // namespace fluctuant
