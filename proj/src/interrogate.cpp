#include "synergy/interrogate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "synergy/error.hpp"
#include "synergy/parallel.hpp"

namespace synergy {

namespace {

double softplus(double z) noexcept {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double log_two_cosh(double z) noexcept {
  const double az = std::abs(z);
  return az + std::log1p(std::exp(-2.0 * az));
}

void require_domain(const RbmParams& params, SpinDomain domain) {
  if (params.domain != domain) {
    throw UsageError("operation requires a " + to_string(domain) + " RBM, got " +
                     to_string(params.domain));
  }
}

Config checked_mask(const RbmParams& params, const IndexSet& subset) {
  Config mask = 0;
  for (std::size_t k : subset) {
    if (k >= params.n_visible) {
      throw UsageError("subset index " + std::to_string(k + 1) + " out of range (n_visible=" +
                       std::to_string(params.n_visible) + ")");
    }
    mask |= Config{1} << k;
  }
  return mask;
}

void require_power_of_two(std::size_t size) {
  if (size == 0 || !std::has_single_bit(size)) {
    throw UsageError("table size must be a power of two");
  }
}

InteractionTable table_from_dense(const std::vector<double>& coeffs, Convention convention) {
  InteractionTable table;
  table.n_visible = static_cast<std::size_t>(std::countr_zero(coeffs.size()));
  table.convention = convention;
  for (Config s = 0; s < coeffs.size(); ++s) table.coeffs.emplace(subset_indices(s), coeffs[s]);
  return table;
}

}  // namespace

bool SubsetOrder::operator()(const IndexSet& lhs, const IndexSet& rhs) const {
  if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
  return lhs < rhs;
}

double InteractionTable::at(const IndexSet& subset) const {
  IndexSet key = subset;
  std::sort(key.begin(), key.end());
  const auto it = coeffs.find(key);
  if (it == coeffs.end()) throw UsageError("subset not present in the interaction table");
  return it->second;
}

double InteractionTable::reconstruct(Config config) const {
  double sum = 0.0;
  for (const auto& [subset, value] : coeffs) {
    const Config s = subset_mask(subset);
    if (convention == Convention::pm1_parity) {
      sum += parity(config, s) * value;
    } else if ((config & s) == s) {
      sum += value;
    }
  }
  return sum;
}

double InteractionTable::max_abs_of_order(std::size_t order) const {
  double best = 0.0;
  for (const auto& [subset, value] : coeffs) {
    if (subset.size() == order) best = std::max(best, std::abs(value));
  }
  return best;
}

double effective_energy_of(const RbmParams& params, std::span<const int> visible) {
  return effective_energy(params, visible);
}

double interaction_pm1(const RbmParams& params, const IndexSet& subset) {
  params.validate();
  require_domain(params, SpinDomain::pm1);
  const Config s_mask = checked_mask(params, subset);
  const std::size_t n = params.n_visible;
  if (n >= 40) throw CapExceeded("closed form over 2^n terms is limited to n < 40");
  const IndexSet in_subset = subset_indices(s_mask);
  const IndexSet rest = subset_indices(mask_of(n) & ~s_mask);

  // Sign pattern on S (bit set = spin -1), weighted by (-1)^p with p the
  // number of -1 spins in S; eta runs over the spins outside S in Gray-code
  // order so each step flips one spin and updates the activations in place.
  const std::size_t nh = params.n_hidden;
  std::vector<double> act(nh);
  double total = 0.0;
  for (Config pattern = 0; pattern < (Config{1} << in_subset.size()); ++pattern) {
    std::vector<double> spin(n, 1.0);
    for (std::size_t t = 0; t < in_subset.size(); ++t) {
      if (bit_of(pattern, t)) spin[in_subset[t]] = -1.0;
    }
    double field = 0.0;
    for (std::size_t i = 0; i < n; ++i) field += params.a[i] * spin[i];
    act.assign(params.b.begin(), params.b.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < nh; ++j) act[j] += params.weight(i, j) * spin[i];
    }
    const auto heff = [&] {
      double h = -field;
      for (double x : act) h -= log_two_cosh(x);
      return h;
    };
    double inner = heff();
    for (Config step = 1; step < (Config{1} << rest.size()); ++step) {
      const std::size_t i = rest[std::countr_zero(step)];
      const double delta = -2.0 * spin[i];
      spin[i] = -spin[i];
      field += params.a[i] * delta;
      for (std::size_t j = 0; j < nh; ++j) act[j] += params.weight(i, j) * delta;
      inner += heff();
    }
    total += (std::popcount(pattern) & 1) ? -inner : inner;
  }
  return std::ldexp(total, -static_cast<int>(n));
}

std::vector<double> effective_energy_table(const RbmParams& params, std::size_t cap) {
  params.validate();
  if (params.n_visible > cap) {
    throw CapExceeded("n_visible=" + std::to_string(params.n_visible) +
                      " exceeds the full-table cap of " + std::to_string(cap) +
                      "; request individual subsets instead");
  }
  std::vector<double> values(std::size_t{1} << params.n_visible);
  parallel_for(values.size(), [&](std::size_t c) { values[c] = effective_energy(params, c); });
  return values;
}

void walsh_hadamard(std::span<double> values) {
  require_power_of_two(values.size());
  for (std::size_t half = 1; half < values.size(); half <<= 1) {
    for (std::size_t base = 0; base < values.size(); base += 2 * half) {
      for (std::size_t k = base; k < base + half; ++k) {
        const double x = values[k];
        const double y = values[k + half];
        values[k] = x + y;
        values[k + half] = x - y;
      }
    }
  }
}

void moebius_inversion(std::span<double> values) {
  require_power_of_two(values.size());
  for (std::size_t bit = 1; bit < values.size(); bit <<= 1) {
    for (std::size_t s = 0; s < values.size(); ++s) {
      if (s & bit) values[s] -= values[s ^ bit];
    }
  }
}

InteractionTable interaction_table_pm1(const RbmParams& params, std::size_t cap) {
  require_domain(params, SpinDomain::pm1);
  std::vector<double> values = effective_energy_table(params, cap);
  walsh_hadamard(values);
  const int n = static_cast<int>(params.n_visible);
  for (double& x : values) x = std::ldexp(x, -n);
  return table_from_dense(values, Convention::pm1_parity);
}

double cumulant_function(const RbmParams& params, std::size_t hidden, double x) {
  const double b = params.b.at(hidden);
  if (params.domain == SpinDomain::zero_one) {
    // log((1 + e^(b+x)) / (1 + e^b))
    return softplus(b + x) - softplus(b);
  }
  return log_two_cosh(b + x) - log_two_cosh(b);
}

double interaction_zero_one(const RbmParams& params, const IndexSet& subset) {
  params.validate();
  require_domain(params, SpinDomain::zero_one);
  if (subset.empty()) throw UsageError("empty subset: use the constant term of the table instead");
  const Config s_mask = checked_mask(params, subset);
  const IndexSet members = subset_indices(s_mask);
  const std::size_t s = members.size();
  if (s >= 40) throw CapExceeded("subset too large to enumerate");

  double total = 0.0;
  for (std::size_t p = 0; p < s; ++p) {
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    // Every T within S of size s - p.
    for (Config pick = 0; pick < (Config{1} << s); ++pick) {
      if (static_cast<std::size_t>(std::popcount(pick)) != s - p) continue;
      for (std::size_t j = 0; j < params.n_hidden; ++j) {
        double x = 0.0;
        for (std::size_t t = 0; t < s; ++t) {
          if (bit_of(pick, t)) x += params.weight(members[t], j);
        }
        total += sign * cumulant_function(params, j, x);
      }
    }
  }
  return total;
}

InteractionTable interaction_table_zero_one(const RbmParams& params, std::size_t cap) {
  require_domain(params, SpinDomain::zero_one);
  std::vector<double> values = effective_energy_table(params, cap);
  moebius_inversion(values);
  return table_from_dense(values, Convention::zero_one_moebius);
}

InteractionTable interaction_table(const RbmParams& params, std::size_t cap) {
  return params.domain == SpinDomain::pm1 ? interaction_table_pm1(params, cap)
                                          : interaction_table_zero_one(params, cap);
}

InteractionTable oracle_parity_coefficients(std::span<const double> values) {
  require_power_of_two(values.size());
  const std::size_t size = values.size();
  std::vector<double> coeffs(size);
  for (Config s = 0; s < size; ++s) {
    double sum = 0.0;
    for (Config x = 0; x < size; ++x) sum += parity(x, s) * values[x];
    coeffs[s] = sum / static_cast<double>(size);
  }
  return table_from_dense(coeffs, Convention::pm1_parity);
}

InteractionTable oracle_moebius_coefficients(std::span<const double> values) {
  require_power_of_two(values.size());
  const std::size_t size = values.size();
  std::vector<double> coeffs(size);
  for (Config s = 0; s < size; ++s) {
    double sum = 0.0;
    // Enumerate T within S by the standard submask walk, including T = {}.
    for (Config t = s;; t = (t - 1) & s) {
      sum += ((std::popcount(s) - std::popcount(t)) & 1) ? -values[t] : values[t];
      if (t == 0) break;
    }
    coeffs[s] = sum;
  }
  return table_from_dense(coeffs, Convention::zero_one_moebius);
}

nlohmann::json to_json(const InteractionTable& table, std::optional<std::size_t> max_order) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [subset, value] : table.coeffs) {
    if (max_order && subset.size() > *max_order) continue;
    nlohmann::json one_based = nlohmann::json::array();
    for (std::size_t k : subset) one_based.push_back(k + 1);
    coeffs.push_back({{"subset", one_based}, {"value", value}});
  }
  return {{"n", table.n_visible},
          {"convention", table.convention == Convention::pm1_parity ? "pm1_parity" : "zero_one_moebius"},
          {"coeffs", coeffs}};
}

}  // namespace synergy
