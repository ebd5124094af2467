#pragma once

#include <cstdint>
#include <random>

namespace mpdp {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based derivation: the child seed depends only on (parent, stream, index),
// never on the order in which children are requested.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(splitmix64(parent) ^ stream) + index);
}

inline Rng make_rng(std::uint64_t parent, std::uint64_t stream, std::uint64_t index = 0) {
  return Rng(derive_seed(parent, stream, index));
}

}  // namespace mpdp
