#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace interline {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view text, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

using Engine = std::mt19937_64;

/// Independent stream for one named consumer (a route) under a scenario seed.
inline Engine make_stream(std::uint64_t seed, std::string_view name) {
  return Engine(splitmix64(seed ^ splitmix64(fnv1a64(name))));
}

/// Uniform variate strictly inside (0, 1), same bits on every platform.
inline double uniform_open01(Engine& engine) {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace interline
