#include "synergy/infotheory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>

#include "synergy/error.hpp"
#include "synergy/parallel.hpp"

namespace synergy {

namespace {

void require_disjoint(std::initializer_list<const IndexSet*> groups) {
  std::set<std::size_t> seen;
  for (const IndexSet* g : groups) {
    for (std::size_t v : *g) {
      if (!seen.insert(v).second) {
        throw UsageError("groups overlap at index " + std::to_string(v + 1));
      }
    }
  }
}

IndexSet join(const IndexSet& x, const IndexSet& y) {
  IndexSet out = x;
  out.insert(out.end(), y.begin(), y.end());
  std::sort(out.begin(), out.end());
  return out;
}

IndexSet join(const IndexSet& x, const IndexSet& y, const IndexSet& z) { return join(join(x, y), z); }

// Entropies H(union of T) for every nonempty group subset T, indexed by mask.
std::vector<double> subset_entropies(const ExactDistribution& dist, const PartitionSpec& partition,
                                     const EntropyOptions& options) {
  const std::size_t n = partition.size();
  if (n >= 24) throw CapExceeded("too many partition groups");
  std::vector<double> h(std::size_t{1} << n, 0.0);
  parallel_for(h.size() - 1, [&](std::size_t i) {
    const Config mask = i + 1;
    h[mask] = entropy(dist, partition.union_of(mask), options);
  });
  return h;
}

double recursive_in(const ExactDistribution& dist, const std::vector<IndexSet>& groups,
                    const EntropyOptions& options);

// I_m(groups | c) = I_m(g_1 : ... : g_{m-1} c) - I_m(g_1 : ... : g_{m-2} : c)
double recursive_conditional(const ExactDistribution& dist, const std::vector<IndexSet>& groups,
                             const IndexSet& c, const EntropyOptions& options) {
  std::vector<IndexSet> merged = groups;
  merged.back() = join(merged.back(), c);
  std::vector<IndexSet> swapped = groups;
  swapped.back() = c;
  return recursive_in(dist, merged, options) - recursive_in(dist, swapped, options);
}

double recursive_in(const ExactDistribution& dist, const std::vector<IndexSet>& groups,
                    const EntropyOptions& options) {
  if (groups.size() == 2) return mutual_information(dist, groups[0], groups[1], options);
  const std::vector<IndexSet> head(groups.begin(), groups.end() - 1);
  return recursive_in(dist, head, options) -
         recursive_conditional(dist, head, groups.back(), options);
}

}  // namespace

double entropy(const ExactDistribution& dist, const IndexSet& group, const EntropyOptions& options) {
  if (group.empty()) return 0.0;
  const ExactDistribution m = dist.marginal(group);
  double h = 0.0;
  std::size_t occupied = 0;
  m.for_each([&](Config, double p) {
    h -= p * std::log(p);
    ++occupied;
  });
  if (options.estimator == Estimator::miller_madow) {
    if (options.sample_count == 0) throw UsageError("Miller-Madow estimator needs the sample count");
    h += static_cast<double>(occupied - 1) / (2.0 * static_cast<double>(options.sample_count));
  }
  return h;
}

double mutual_information(const ExactDistribution& dist, const IndexSet& a, const IndexSet& b,
                          const EntropyOptions& options) {
  require_disjoint({&a, &b});
  return entropy(dist, a, options) + entropy(dist, b, options) - entropy(dist, join(a, b), options);
}

double conditional_mutual_information(const ExactDistribution& dist, const IndexSet& a,
                                      const IndexSet& b, const IndexSet& c,
                                      const EntropyOptions& options) {
  require_disjoint({&a, &b, &c});
  return entropy(dist, join(a, c), options) + entropy(dist, join(b, c), options) -
         entropy(dist, c, options) - entropy(dist, join(a, b, c), options);
}

double interaction_information(const ExactDistribution& dist, const PartitionSpec& partition,
                               const EntropyOptions& options) {
  if (partition.size() < 2) throw UsageError("interaction information needs at least 2 groups");
  partition.validate(dist.num_vars());
  const std::vector<double> h = subset_entropies(dist, partition, options);
  double sum = 0.0;
  for (Config mask = 1; mask < h.size(); ++mask) {
    sum += (std::popcount(mask) & 1) ? h[mask] : -h[mask];
  }
  return sum;
}

double interaction_information_recursive(const ExactDistribution& dist,
                                         const PartitionSpec& partition,
                                         const EntropyOptions& options) {
  if (partition.size() < 2) throw UsageError("interaction information needs at least 2 groups");
  partition.validate(dist.num_vars());
  if (partition.size() > 8) throw CapExceeded("recursive evaluator is limited to 8 groups");
  return recursive_in(dist, partition.groups, options);
}

double s_topo_kitaev_preskill(const ExactDistribution& dist, const IndexSet& a, const IndexSet& b,
                              const IndexSet& c, const EntropyOptions& options) {
  require_disjoint({&a, &b, &c});
  const auto h = [&](const IndexSet& g) { return entropy(dist, g, options); };
  return h(a) + h(b) + h(c) - h(join(a, b)) - h(join(b, c)) - h(join(a, c)) + h(join(a, b, c));
}

double s_topo_levin_wen(const ExactDistribution& dist, const IndexSet& a, const IndexSet& b,
                        const IndexSet& c, const EntropyOptions& options) {
  require_disjoint({&a, &b, &c});
  const auto h = [&](const IndexSet& g) { return entropy(dist, g, options); };
  return h(join(a, b, c)) - h(join(a, c)) - h(join(b, c)) + h(c);
}

double s_topo_n(const ExactDistribution& dist, const PartitionSpec& partition,
                const EntropyOptions& options) {
  if (partition.size() < 2) throw UsageError("n-partite construction needs at least 2 groups");
  partition.validate(dist.num_vars());
  const std::size_t n = partition.size();
  const std::vector<double> h = subset_entropies(dist, partition, options);
  // Group by subset size i, then apply (-1)^(i+n).
  std::vector<double> by_size(n + 1, 0.0);
  for (Config mask = 1; mask < h.size(); ++mask) by_size[std::popcount(mask)] += h[mask];
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) sum += ((i + n) % 2 == 0) ? by_size[i] : -by_size[i];
  return sum;
}

std::string to_string(Quantity quantity) {
  switch (quantity) {
    case Quantity::entropy: return "entropy";
    case Quantity::mi: return "mi";
    case Quantity::cmi: return "cmi";
    case Quantity::interaction_info: return "interaction_info";
    case Quantity::s_topo_kp: return "s_topo_kp";
    case Quantity::s_topo_lw: return "s_topo_lw";
    case Quantity::s_topo_n: return "s_topo_n";
  }
  return "unknown";
}

std::string to_string(Estimator estimator) {
  return estimator == Estimator::plug_in ? "plug_in" : "miller_madow";
}

EntropyReport evaluate(const ExactDistribution& dist, Quantity quantity,
                       const PartitionSpec& partition, const EntropyOptions& options) {
  partition.validate(dist.num_vars());
  const auto need = [&](std::size_t groups) {
    if (partition.size() != groups) {
      throw UsageError(to_string(quantity) + " needs exactly " + std::to_string(groups) +
                       " partition groups, got " + std::to_string(partition.size()));
    }
  };
  const auto& g = partition.groups;
  EntropyReport report;
  report.quantity = quantity;
  report.partition = partition;
  report.estimator = options.estimator;
  switch (quantity) {
    case Quantity::entropy:
      if (partition.size() == 0) throw UsageError("entropy needs at least one group");
      report.value = entropy(dist, partition.union_of(mask_of(partition.size())), options);
      break;
    case Quantity::mi:
      need(2);
      report.value = mutual_information(dist, g[0], g[1], options);
      break;
    case Quantity::cmi:
      need(3);
      report.value = conditional_mutual_information(dist, g[0], g[1], g[2], options);
      break;
    case Quantity::interaction_info:
      report.value = interaction_information(dist, partition, options);
      break;
    case Quantity::s_topo_kp:
      need(3);
      report.value = s_topo_kitaev_preskill(dist, g[0], g[1], g[2], options);
      break;
    case Quantity::s_topo_lw:
      need(3);
      report.value = s_topo_levin_wen(dist, g[0], g[1], g[2], options);
      break;
    case Quantity::s_topo_n:
      report.value = s_topo_n(dist, partition, options);
      break;
  }
  return report;
}

nlohmann::json to_json(const EntropyReport& report, bool bits) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& group : report.partition.groups) {
    nlohmann::json g = nlohmann::json::array();
    for (std::size_t v : group) g.push_back(v + 1);
    groups.push_back(g);
  }
  nlohmann::json out = {
      {"quantity", to_string(report.quantity)},
      {"value", bits ? report.value / std::numbers::ln2 : report.value},
      {"units", bits ? "bits" : "nats"},
      {"partition", groups},
      {"estimator", to_string(report.estimator)},
  };
  if (report.conditioned_on) {
    nlohmann::json cond = nlohmann::json::object();
    for (const auto& [index, value] : *report.conditioned_on) cond[std::to_string(index + 1)] = value;
    out["conditioned_on"] = cond;
  }
  return out;
}

}  // namespace synergy
