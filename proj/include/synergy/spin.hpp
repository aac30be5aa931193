// Binary spin configurations packed into 64-bit masks.
//
// Variable i of a configuration lives in bit i. The bit value maps onto the
// spin value through the domain:
//   pm1:      bit 0 -> +1, bit 1 -> -1
//   zero_one: bit 0 ->  0, bit 1 ->  1
// With this packing the parity function prod_{k in S} sigma_k of a pm1
// configuration x equals (-1)^popcount(x & S).
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace synergy {

using Config = std::uint64_t;
using IndexSet = std::vector<std::size_t>;

inline constexpr std::size_t kMaxVars = 64;

enum class SpinDomain { pm1, zero_one };

std::string to_string(SpinDomain domain);
SpinDomain parse_domain(std::string_view text);

/// Spin value carried by a single bit.
constexpr int spin_value(SpinDomain domain, bool bit) noexcept {
  if (domain == SpinDomain::pm1) return bit ? -1 : 1;
  return bit ? 1 : 0;
}

/// Bit encoding a spin value; throws DataError for values outside the domain.
bool spin_bit(SpinDomain domain, int value);

constexpr bool bit_of(Config config, std::size_t index) noexcept {
  return ((config >> index) & 1u) != 0;
}

constexpr Config mask_of(std::size_t num_vars) noexcept {
  return num_vars >= 64 ? ~Config{0} : ((Config{1} << num_vars) - 1);
}

/// +1 or -1: the pm1 parity character of `subset` evaluated at `config`.
constexpr int parity(Config config, Config subset) noexcept {
  return (std::popcount(config & subset) & 1) ? -1 : 1;
}

Config subset_mask(const IndexSet& subset);
IndexSet subset_indices(Config mask);

/// Unpack a configuration into spin values.
std::vector<int> spins_of(Config config, std::size_t num_vars, SpinDomain domain);

/// Pack spin values; throws DataError when a value is outside the domain.
Config config_of(const std::vector<int>& spins, SpinDomain domain);

}  // namespace synergy
