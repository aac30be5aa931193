// Effective n-body couplings of a trained RBM.
//
// For pm1 units the effective energy expands in parity functions,
//   H^eff(sigma) = sum_S I_S prod_{k in S} sigma_k,
//   I_S = 2^-N sum_sigma prod_{k in S} sigma_k H^eff(sigma),
// with the constant term I_{} kept so the expansion is exact. For zero_one
// units the expansion runs over monomials of indicator variables and the
// coefficients follow from Moebius inversion on the subset lattice.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "synergy/rbm.hpp"
#include "synergy/spin.hpp"

namespace synergy {

enum class Convention { pm1_parity, zero_one_moebius };

/// Orders subsets by size, then lexicographically.
struct SubsetOrder {
  bool operator()(const IndexSet& lhs, const IndexSet& rhs) const;
};

struct InteractionTable {
  std::size_t n_visible = 0;
  Convention convention = Convention::pm1_parity;
  std::map<IndexSet, double, SubsetOrder> coeffs;  // sorted 0-based subsets

  double at(const IndexSet& subset) const;

  /// Sum of the expansion at a configuration (bits as in spin.hpp).
  double reconstruct(Config config) const;

  /// Largest |coefficient| among subsets of exactly `order` elements.
  double max_abs_of_order(std::size_t order) const;
};

inline constexpr std::size_t kDefaultTableCap = 24;

/// Same quantity as rbm's effective_energy.
double effective_energy_of(const RbmParams& params, std::span<const int> visible);

/// Closed-form pm1 coefficient of `subset` (empty subset gives the constant).
/// The 2^N terms are grouped by the sign pattern on the subset, each pattern
/// weighted by (-1)^(number of -1 spins) and summed over every completion of
/// the remaining spins. Throws UsageError for a non-pm1 machine or
/// out-of-range indices.
double interaction_pm1(const RbmParams& params, const IndexSet& subset);

/// All 2^N pm1 coefficients through a fast Walsh-Hadamard transform of the
/// H^eff table. Throws CapExceeded when n_visible > cap.
InteractionTable interaction_table_pm1(const RbmParams& params,
                                       std::size_t cap = kDefaultTableCap);

/// Hidden-layer cumulant function of unit j with the normalized hidden prior,
///   K_j(x) = log sum_t exp(t x) rho_j(t),  rho_j(t) = exp(b_j t) / sum_t' exp(b_j t').
double cumulant_function(const RbmParams& params, std::size_t hidden, double x);

/// zero_one coefficient of prod_{k in S} sigma_k in sum_j K_j(sum_i w_ij sigma_i):
///   sum_{p=0}^{s-1} (-1)^p sum_{T subset S, |T| = s-p} sum_j K_j(sum_{k in T} w_kj).
/// Throws UsageError for an empty subset or a non zero_one machine.
double interaction_zero_one(const RbmParams& params, const IndexSet& subset);

/// All 2^N zero_one coefficients of H^eff by fast Moebius inversion over
/// indicator inputs. For |S| >= 2 the entry equals -interaction_zero_one(S).
InteractionTable interaction_table_zero_one(const RbmParams& params,
                                            std::size_t cap = kDefaultTableCap);

/// Table of the RBM's own convention (dispatches on the domain).
InteractionTable interaction_table(const RbmParams& params, std::size_t cap = kDefaultTableCap);

/// H^eff at every configuration, indexed by configuration bits.
std::vector<double> effective_energy_table(const RbmParams& params,
                                           std::size_t cap = kDefaultTableCap);

/// Brute-force O(4^n) parity coefficients 2^-n sum_x chi_S(x) f(x); `values`
/// is indexed by configuration bits and must have 2^n entries.
InteractionTable oracle_parity_coefficients(std::span<const double> values);

/// Brute-force Moebius inversion c_S = sum_{T subset S} (-1)^(|S|-|T|) f(1_T);
/// `values` is indexed by indicator masks and must have 2^n entries.
InteractionTable oracle_moebius_coefficients(std::span<const double> values);

/// In-place unnormalized Walsh-Hadamard transform; size must be a power of two.
void walsh_hadamard(std::span<double> values);

/// In-place Moebius inversion over the subset lattice; size a power of two.
void moebius_inversion(std::span<double> values);

/// {"n":..., "convention":..., "coeffs":[{"subset":[1-based...],"value":...}]}
/// in (order, lexicographic) order, truncated to order <= max_order if given.
nlohmann::json to_json(const InteractionTable& table,
                       std::optional<std::size_t> max_order = std::nullopt);

}  // namespace synergy
