// Deterministic pseudo-random numbers.
//
// xoshiro256** (Blackman & Vigna) seeded through splitmix64. The standard
// library distributions are implementation-defined, so uniform, bounded and
// normal variates are derived here to keep streams identical across
// platforms and compilers.
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace synergy {

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform integer in [0, bound) without modulo bias. bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Standard normal variate (Box-Muller, no cached second value).
  double normal() noexcept;

 private:
  std::array<std::uint64_t, 4> state_;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace synergy
