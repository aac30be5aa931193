#include "synergy/spin.hpp"

#include "synergy/error.hpp"

namespace synergy {

std::string to_string(SpinDomain domain) {
  return domain == SpinDomain::pm1 ? "pm1" : "zero_one";
}

SpinDomain parse_domain(std::string_view text) {
  if (text == "pm1") return SpinDomain::pm1;
  if (text == "zero_one") return SpinDomain::zero_one;
  throw DataError("unknown spin domain '" + std::string(text) + "'");
}

bool spin_bit(SpinDomain domain, int value) {
  if (domain == SpinDomain::pm1) {
    if (value == 1) return false;
    if (value == -1) return true;
  } else {
    if (value == 0) return false;
    if (value == 1) return true;
  }
  throw DataError("spin value " + std::to_string(value) + " outside domain " +
                  to_string(domain));
}

Config subset_mask(const IndexSet& subset) {
  Config mask = 0;
  for (std::size_t k : subset) {
    if (k >= kMaxVars) throw UsageError("variable index " + std::to_string(k) + " out of range");
    mask |= Config{1} << k;
  }
  return mask;
}

IndexSet subset_indices(Config mask) {
  IndexSet out;
  for (std::size_t k = 0; mask != 0; ++k, mask >>= 1) {
    if (mask & 1u) out.push_back(k);
  }
  return out;
}

std::vector<int> spins_of(Config config, std::size_t num_vars, SpinDomain domain) {
  std::vector<int> out(num_vars);
  for (std::size_t i = 0; i < num_vars; ++i) out[i] = spin_value(domain, bit_of(config, i));
  return out;
}

Config config_of(const std::vector<int>& spins, SpinDomain domain) {
  if (spins.size() > kMaxVars) throw DataError("configuration wider than 64 variables");
  Config config = 0;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spin_bit(domain, spins[i])) config |= Config{1} << i;
  }
  return config;
}

}  // namespace synergy
