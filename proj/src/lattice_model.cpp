#include "synergy/lattice_model.hpp"

#include <bit>
#include <string>

#include "synergy/error.hpp"

namespace synergy {

void LoopModel::validate() const {
  if (length < 3) {
    throw UsageError("invalid loop: length ≥ 3 required, got " + std::to_string(length));
  }
  if (length > kMaxVars) throw UsageError("loop length above 64 is not supported");
  if (parity != 1 && parity != -1) throw UsageError("loop parity must be +1 or -1");
}

ExactDistribution tc_loop_distribution(const LoopModel& model) {
  model.validate();
  // Enumerate the first L-1 spins freely; the last spin closes the loop.
  const std::size_t free_vars = model.length - 1;
  if (free_vars >= 40) throw CapExceeded("loop too long to enumerate");
  const bool odd_target = model.parity == -1;
  std::vector<std::pair<Config, double>> weights;
  weights.reserve(std::size_t{1} << free_vars);
  for (Config head = 0; head < (Config{1} << free_vars); ++head) {
    const bool head_odd = (std::popcount(head) & 1) != 0;
    const Config last = (head_odd != odd_target) ? (Config{1} << free_vars) : 0;
    weights.emplace_back(head | last, 1.0);
  }
  return ExactDistribution(model.length, weights, SpinDomain::pm1);
}

ExactDistribution iid_coin_distribution(std::size_t n, SpinDomain domain) {
  if (n == 0) throw UsageError("iid model needs at least one variable");
  if (n >= 40) throw CapExceeded("iid model too large to enumerate");
  std::vector<std::pair<Config, double>> weights;
  weights.reserve(std::size_t{1} << n);
  for (Config c = 0; c < (Config{1} << n); ++c) weights.emplace_back(c, 1.0);
  return ExactDistribution(n, weights, domain);
}

}  // namespace synergy
