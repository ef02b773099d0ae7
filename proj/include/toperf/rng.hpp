#pragma once

// Keyed random streams. Every stochastic decision draws from an engine seeded
// by a hash of (global seed, entity keys), so results never depend on the
// order or thread in which entities are processed.

#include <cstdint>
#include <initializer_list>
#include <string_view>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace toperf {

using Engine = boost::random::mt19937_64;

constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

inline Engine make_engine(std::uint64_t key) { return Engine(key); }

/// Uniform index in [0, n); n must be positive.
inline std::size_t uniform_index(Engine& engine, std::size_t n) {
  boost::random::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine);
}

/// Fisher-Yates with a portable index distribution.
template <typename Range>
void portable_shuffle(Range& range, Engine& engine) {
  const std::size_t n = range.size();
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = uniform_index(engine, i);
    using std::swap;
    swap(range[i - 1], range[j]);
  }
}

}  // namespace toperf
