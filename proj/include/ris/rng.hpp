#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "ris/text.hpp"

namespace ris {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for a named sub-stream; the same (seed, key) always yields the
// same stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
  return splitmix64(seed ^ splitmix64(text::fnv1a64(key)));
}

// Uniform integer in [0, bound) from raw 64-bit engine output. Unlike
// std::uniform_int_distribution the result is identical on every standard
// library.
template <typename Engine>
std::uint64_t uniform_below(Engine& gen, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = gen();
    if (r >= threshold) return r % bound;
  }
}

// Uniform double in [0, 1) with 53 random bits.
template <typename Engine>
double uniform_unit(Engine& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace ris
