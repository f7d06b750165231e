#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace tdcast {

// Every random component derives its engine seed as base seed + fixed offset,
// so a single configuration seed pins the whole pipeline.
namespace seed_offset {
inline constexpr std::uint64_t network_init = 1;
inline constexpr std::uint64_t shuffle = 2;
inline constexpr std::uint64_t synthetic = 3;
}  // namespace seed_offset

inline std::uint64_t sub_seed(std::uint64_t base, std::uint64_t offset) { return base + offset; }

// Uniform draw in [0, 1) built from the top 53 bits of the engine output.
// std::uniform_real_distribution is implementation-defined; this is not.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

// Box-Muller without caching: exactly two engine draws per sample.
inline double normal01(std::mt19937_64& rng) {
  constexpr double kTwoPi = 6.28318530717958647692;
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Fisher-Yates with the modulo index draw above.
template <typename T>
void shuffle_in_place(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[uniform_index(rng, i)]);
  }
}

}  // namespace tdcast
