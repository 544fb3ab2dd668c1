#pragma once

#include <cstdint>

#include "numrad/matrix.hpp"

namespace numrad {

/// One splitmix64 finaliser step applied to x.
constexpr std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for trial `trial` of a sweep seeded with `seed`. Derived by hashing so
/// trials can be generated in any order.
constexpr std::uint64_t derive_sub_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
  return splitmix64_mix(seed ^ splitmix64_mix(trial + 0x632BE59BD9B4E019ULL));
}

/// Deterministic splitmix64 stream. Uniform doubles use the top 53 bits;
/// Gaussians come from Box-Muller on pairs of uniforms (second variate cached).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t bound) noexcept { return bound == 0 ? 0 : next_u64() % bound; }

  double gaussian() noexcept;
  /// Standard complex Gaussian, E|z|^2 = 1.
  Complex complex_gaussian() noexcept;

  Vector gaussian_vector(std::size_t n);
  Vector unit_vector(std::size_t n);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace numrad
