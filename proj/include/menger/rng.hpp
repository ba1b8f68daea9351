#pragma once

// Counter-based random streams. A draw is a pure function of
// (seed, stream, counter), so results do not depend on how work is split
// across threads.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace menger {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), key_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

  /// Independent child stream, e.g. one per sample or per coordinate.
  constexpr CounterRng substream(std::uint64_t id) const {
    return CounterRng(seed_, splitmix64(stream_ ^ splitmix64(id + 0xd1b54a32d192ed03ULL)));
  }

  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return splitmix64(key_ ^ splitmix64(counter * 0xff51afd7ed558ccdULL + 1));
  }

  /// Uniform on [0, 1).
  constexpr double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  constexpr std::uint64_t below(std::uint64_t counter, std::uint64_t n) const {
    return static_cast<std::uint64_t>(uniform(counter) * static_cast<double>(n)) % n;
  }

  /// Standard normal from counters 2c and 2c+1 (Box-Muller).
  double normal(std::uint64_t counter) const {
    const double u1 = 1.0 - uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  constexpr std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
};

}  // namespace menger
