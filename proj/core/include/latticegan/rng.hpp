#pragma once

#include <cstdint>
#include <random>

namespace latticegan {

// splitmix64 finalizer; scrambles a 64-bit value into a well-mixed one.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base) { return mix64(base); }

// Derives a stream seed from a base seed and one or more stream tags.
// Equal inputs give equal seeds; distinct tag tuples give independent streams.
template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, Rest... rest) {
  return derive_seed(mix64(base ^ mix64(tag ^ 0x5851f42d4c957f2dULL)), rest...);
}

// Seedable random source used everywhere randomness is consumed. All draws
// go through this wrapper so trajectories are reproducible from a seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  double gaussian(double mean, double stddev) {
    if (stddev == 0.0) return mean;
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

  // Uniform integer in [0, n); n must be >= 1.
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return std::bernoulli_distribution(p)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace latticegan
