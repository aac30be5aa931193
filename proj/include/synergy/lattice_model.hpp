// Wilson-loop subsystem models of the Toric code ground state and null models.
#pragma once

#include <cstddef>

#include "synergy/distribution.hpp"

namespace synergy {

enum class Basis { z, x };

/// L spins on a closed loop whose product is constrained to `parity`. The
/// basis is bookkeeping: plaquette (z) and star (x) loops impose the same
/// product constraint on their measured spins.
struct LoopModel {
  std::size_t length = 4;
  int parity = +1;
  Basis basis = Basis::z;

  /// Throws UsageError unless length >= 3 and parity is +1 or -1.
  void validate() const;
};

/// Uniform law over the 2^(L-1) configurations whose spin product equals the
/// model parity, in the pm1 domain.
ExactDistribution tc_loop_distribution(const LoopModel& model);

/// Uniform law over all 2^n configurations.
ExactDistribution iid_coin_distribution(std::size_t n, SpinDomain domain = SpinDomain::pm1);

}  // namespace synergy
