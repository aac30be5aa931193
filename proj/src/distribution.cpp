#include "synergy/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "synergy/error.hpp"

namespace synergy {

ExactDistribution::ExactDistribution(std::size_t num_vars,
                                     const std::vector<std::pair<Config, double>>& weights,
                                     SpinDomain domain)
    : num_vars_(num_vars), domain_(domain) {
  if (num_vars == 0 || num_vars > kMaxVars) {
    throw DataError("distribution needs between 1 and 64 variables, got " +
                    std::to_string(num_vars));
  }
  const Config mask = mask_of(num_vars);
  double total = 0.0;
  for (const auto& [config, weight] : weights) {
    if (!std::isfinite(weight) || weight < 0.0) {
      throw DataError("probability weights must be finite and nonnegative");
    }
    if ((config & ~mask) != 0) throw DataError("configuration has bits beyond num_vars");
    total += weight;
  }
  if (!(total > 0.0)) throw DataError("distribution has zero total weight");

  if (num_vars <= kDenseLimit) {
    dense_.assign(std::size_t{1} << num_vars, 0.0);
    for (const auto& [config, weight] : weights) dense_[config] += weight / total;
  } else {
    for (const auto& [config, weight] : weights) {
      if (weight > 0.0) sparse_[config] += weight / total;
    }
  }
}

double ExactDistribution::probability(Config config) const {
  if ((config & ~mask_of(num_vars_)) != 0) return 0.0;
  if (is_dense()) return dense_[config];
  const auto it = sparse_.find(config);
  return it == sparse_.end() ? 0.0 : it->second;
}

std::size_t ExactDistribution::support_size() const {
  if (!is_dense()) return sparse_.size();
  return static_cast<std::size_t>(
      std::count_if(dense_.begin(), dense_.end(), [](double p) { return p > 0.0; }));
}

void ExactDistribution::for_each(const std::function<void(Config, double)>& visit) const {
  if (is_dense()) {
    for (Config c = 0; c < dense_.size(); ++c) {
      if (dense_[c] > 0.0) visit(c, dense_[c]);
    }
  } else {
    for (const auto& [c, p] : sparse_) visit(c, p);
  }
}

std::vector<std::pair<Config, double>> ExactDistribution::entries() const {
  std::vector<std::pair<Config, double>> out;
  for_each([&](Config c, double p) { out.emplace_back(c, p); });
  return out;
}

ExactDistribution ExactDistribution::marginal(const IndexSet& vars) const {
  if (vars.empty()) throw UsageError("marginal over an empty variable set");
  std::set<std::size_t> seen;
  for (std::size_t v : vars) {
    if (v >= num_vars_) throw UsageError("variable index " + std::to_string(v + 1) + " out of range");
    if (!seen.insert(v).second) throw UsageError("repeated variable in marginal");
  }
  std::map<Config, double> acc;
  for_each([&](Config c, double p) {
    Config projected = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (bit_of(c, vars[k])) projected |= Config{1} << k;
    }
    acc[projected] += p;
  });
  return ExactDistribution(vars.size(), {acc.begin(), acc.end()}, domain_);
}

ExactDistribution condition(const ExactDistribution& dist, const Assignment& assignments) {
  const std::size_t n = dist.num_vars();
  Config fixed_mask = 0;
  Config fixed_bits = 0;
  for (const auto& [index, value] : assignments) {
    if (index >= n) throw UsageError("conditioned variable " + std::to_string(index + 1) + " out of range");
    const Config bit = Config{1} << index;
    const bool b = spin_bit(dist.domain(), value);
    if ((fixed_mask & bit) && (((fixed_bits & bit) != 0) != b)) {
      throw DataError("contradictory assignments for variable " + std::to_string(index + 1));
    }
    fixed_mask |= bit;
    if (b) fixed_bits |= bit;
  }
  IndexSet kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(fixed_mask & (Config{1} << i))) kept.push_back(i);
  }
  if (kept.empty()) throw DataError("conditioning leaves no free variables");

  std::vector<std::pair<Config, double>> weights;
  double mass = 0.0;
  dist.for_each([&](Config c, double p) {
    if ((c & fixed_mask) != fixed_bits) return;
    Config projected = 0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if (bit_of(c, kept[k])) projected |= Config{1} << k;
    }
    weights.emplace_back(projected, p);
    mass += p;
  });
  if (!(mass > 0.0)) throw DataError("conditioning on a zero-probability event");
  return ExactDistribution(kept.size(), weights, dist.domain());
}

void PartitionSpec::validate(std::size_t num_vars) const {
  std::set<std::size_t> seen;
  for (const auto& group : groups) {
    if (group.empty()) throw UsageError("partition group is empty");
    for (std::size_t v : group) {
      if (v >= num_vars) {
        throw UsageError("partition index " + std::to_string(v + 1) + " out of range (n=" +
                         std::to_string(num_vars) + ")");
      }
      if (!seen.insert(v).second) {
        throw UsageError("partition groups overlap at index " + std::to_string(v + 1));
      }
    }
  }
}

IndexSet PartitionSpec::union_of(Config group_mask) const {
  IndexSet out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (bit_of(group_mask, g)) out.insert(out.end(), groups[g].begin(), groups[g].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json to_json(const ExactDistribution& dist) {
  nlohmann::json probs = nlohmann::json::array();
  dist.for_each([&](Config c, double p) {
    probs.push_back({{"config", spins_of(c, dist.num_vars(), dist.domain())}, {"p", p}});
  });
  return {{"n", dist.num_vars()}, {"probs", probs}};
}

double total_variation(const ExactDistribution& lhs, const ExactDistribution& rhs) {
  if (lhs.num_vars() != rhs.num_vars()) throw UsageError("total variation of mismatched tables");
  std::map<Config, double> diff;
  lhs.for_each([&](Config c, double p) { diff[c] += p; });
  rhs.for_each([&](Config c, double p) { diff[c] -= p; });
  double tv = 0.0;
  for (const auto& [c, d] : diff) tv += std::abs(d);
  return 0.5 * tv;
}

}  // namespace synergy
