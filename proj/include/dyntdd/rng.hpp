#pragma once

#include <cstdint>
#include <random>

namespace dyntdd {

using Rng = std::mt19937_64;

// Independent stream families derived from one drop seed.
enum class Stream : std::uint64_t {
  Layout = 1,
  Shadowing = 2,
  Traffic = 3,
  Harq = 4,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-style stream derivation: the same (seed, stream, index) always
/// yields the same generator, independent of how many other streams exist.
inline Rng make_stream(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ static_cast<std::uint64_t>(stream));
  k = splitmix64(k ^ (index * 0xd1b54a32d192ed03ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  return Rng(seq);
}

}  // namespace dyntdd
