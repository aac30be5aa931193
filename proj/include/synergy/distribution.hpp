// Probability tables over binary configurations.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "synergy/spin.hpp"

namespace synergy {

/// Immutable, normalized probability table over the 2^N configurations of N
/// binary variables. Tables with N <= kDenseLimit are stored densely, larger
/// ones as a sparse map of nonzero entries.
class ExactDistribution {
 public:
  static constexpr std::size_t kDenseLimit = 24;
  static constexpr double kNormTolerance = 1e-12;

  /// Builds a distribution from nonnegative weights (duplicates accumulate)
  /// and normalizes them. Throws DataError on negative, non-finite or
  /// all-zero weights and on configurations with bits beyond num_vars.
  ExactDistribution(std::size_t num_vars,
                    const std::vector<std::pair<Config, double>>& weights,
                    SpinDomain domain = SpinDomain::pm1);

  std::size_t num_vars() const noexcept { return num_vars_; }
  SpinDomain domain() const noexcept { return domain_; }
  bool is_dense() const noexcept { return !dense_.empty(); }

  double probability(Config config) const;

  /// Number of configurations with nonzero probability.
  std::size_t support_size() const;

  /// Visits nonzero entries in increasing configuration order.
  void for_each(const std::function<void(Config, double)>& visit) const;

  /// Nonzero entries in increasing configuration order.
  std::vector<std::pair<Config, double>> entries() const;

  /// Joint law of `vars`; variable k of the result is vars[k] of this table.
  ExactDistribution marginal(const IndexSet& vars) const;

 private:
  std::size_t num_vars_;
  SpinDomain domain_;
  std::vector<double> dense_;
  std::map<Config, double> sparse_;
};

/// A partial assignment variable index -> spin value (in the table's domain).
using Assignment = std::vector<std::pair<std::size_t, int>>;

/// Conditional law of the unassigned variables given `assignments`, with the
/// remaining variables kept in increasing index order. Throws DataError when
/// the conditioning event has probability zero or leaves no variables.
ExactDistribution condition(const ExactDistribution& dist, const Assignment& assignments);

/// Ordered list of disjoint, nonempty variable groups.
struct PartitionSpec {
  std::vector<IndexSet> groups;

  std::size_t size() const noexcept { return groups.size(); }

  /// Throws UsageError if groups overlap, are empty, or reach past num_vars.
  void validate(std::size_t num_vars) const;

  /// Sorted union of the groups selected by `group_mask`.
  IndexSet union_of(Config group_mask) const;

  bool operator==(const PartitionSpec&) const = default;
};

/// {"n": N, "probs": [{"config": [...], "p": ...}, ...]} over nonzero entries.
nlohmann::json to_json(const ExactDistribution& dist);

/// Total-variation distance between two tables on the same variables.
double total_variation(const ExactDistribution& lhs, const ExactDistribution& rhs);

}  // namespace synergy
