#include "synergy/sampler.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "synergy/error.hpp"
#include "synergy/rng.hpp"

namespace synergy {

namespace {

// Prefix masses along an ordering: level k maps the bits of the first k
// ordered variables (bit t <-> variable order[t]) to their joint probability.
class PrefixTables {
 public:
  PrefixTables(const ExactDistribution& dist, const IndexSet& order) : order_(order) {
    const std::size_t n = dist.num_vars();
    if (order.size() != n) throw UsageError("ordering must list every variable once");
    std::vector<bool> seen(n, false);
    for (std::size_t v : order) {
      if (v >= n || seen[v]) throw UsageError("ordering must be a permutation of the variables");
      seen[v] = true;
    }
    levels_.resize(n + 1);
    dist.for_each([&](Config c, double p) {
      Config prefix = 0;
      levels_[0][0] += p;
      for (std::size_t k = 0; k < n; ++k) {
        if (bit_of(c, order_[k])) prefix |= Config{1} << k;
        levels_[k + 1][prefix] += p;
      }
    });
  }

  double mass(std::size_t level, Config prefix) const {
    const auto it = levels_[level].find(prefix);
    return it == levels_[level].end() ? 0.0 : it->second;
  }

  /// p(next ordered variable has bit 0 | prefix of length k).
  double p_zero(std::size_t k, Config prefix) const {
    const double m0 = mass(k + 1, prefix);
    const double m1 = mass(k + 1, prefix | (Config{1} << k));
    const double total = m0 + m1;
    if (!(total > 0.0)) throw DataError("conditioning on a zero-probability prefix");
    return m0 / total;
  }

  Config unpermute(Config prefix) const {
    Config out = 0;
    for (std::size_t k = 0; k < order_.size(); ++k) {
      if (bit_of(prefix, k)) out |= Config{1} << order_[k];
    }
    return out;
  }

 private:
  IndexSet order_;
  std::vector<std::map<Config, double>> levels_;
};

IndexSet natural_order(std::size_t n) {
  IndexSet order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  return order;
}

}  // namespace

SampleSet sample_autoregressive(const ExactDistribution& dist, std::size_t count,
                                std::uint64_t seed, const std::optional<IndexSet>& order) {
  if (count == 0) throw UsageError("sample count must be positive");
  const std::size_t n = dist.num_vars();
  const PrefixTables tables(dist, order.value_or(natural_order(n)));
  Rng rng(seed);
  SampleSet out;
  out.num_vars = n;
  out.domain = dist.domain();
  out.seed = seed;
  out.rows.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    Config prefix = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (rng.uniform() >= tables.p_zero(k, prefix)) prefix |= Config{1} << k;
    }
    out.rows.push_back(tables.unpermute(prefix));
  }
  return out;
}

ExactDistribution autoregressive_joint(const ExactDistribution& dist, const IndexSet& order) {
  const std::size_t n = dist.num_vars();
  const PrefixTables tables(dist, order);
  // Walk the binary tree of prefixes; branches of zero conditional mass are pruned.
  std::vector<std::pair<Config, double>> weights;
  std::vector<std::pair<Config, double>> frontier{{0, 1.0}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::pair<Config, double>> next;
    for (const auto& [prefix, p] : frontier) {
      const double p0 = tables.p_zero(k, prefix);
      if (p0 > 0.0) next.emplace_back(prefix, p * p0);
      if (p0 < 1.0) next.emplace_back(prefix | (Config{1} << k), p * (1.0 - p0));
    }
    frontier = std::move(next);
  }
  weights.reserve(frontier.size());
  for (const auto& [prefix, p] : frontier) weights.emplace_back(tables.unpermute(prefix), p);
  return ExactDistribution(n, weights, dist.domain());
}

ExactDistribution empirical_distribution(const SampleSet& samples) {
  if (samples.rows.empty()) throw DataError("no samples");
  std::map<Config, double> counts;
  for (Config row : samples.rows) counts[row] += 1.0;
  return ExactDistribution(samples.num_vars, {counts.begin(), counts.end()}, samples.domain);
}

void write_samples(const SampleSet& samples, std::ostream& out) {
  out << "# n=" << samples.num_vars << " count=" << samples.rows.size()
      << " seed=" << samples.seed << " source=" << samples.source << '\n';
  if (samples.domain == SpinDomain::zero_one) out << "# domain=zero_one\n";
  for (Config row : samples.rows) {
    for (std::size_t i = 0; i < samples.num_vars; ++i) {
      if (i) out << ' ';
      out << spin_value(samples.domain, bit_of(row, i));
    }
    out << '\n';
  }
}

void write_samples(const SampleSet& samples, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_samples(samples, out);
  if (!out) throw DataError("failed writing " + path.string());
}

namespace {

std::uint64_t parse_uint(const std::string& text, std::size_t line, const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "bad value for " + key + ": '" + text + "'");
  }
}

}  // namespace

SampleSet read_samples(std::istream& in) {
  SampleSet out;
  bool have_header = false;
  std::size_t declared_count = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string body = line.substr(1);
      const auto source_at = body.find("source=");
      if (source_at != std::string::npos) {
        out.source = body.substr(source_at + 7);
        body = body.substr(0, source_at);
      }
      std::istringstream fields(body);
      std::string field;
      bool saw_n = false;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "malformed header field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "n") {
          out.num_vars = parse_uint(value, line_no, key);
          saw_n = true;
        } else if (key == "count") {
          declared_count = parse_uint(value, line_no, key);
        } else if (key == "seed") {
          out.seed = parse_uint(value, line_no, key);
        } else if (key == "domain") {
          try {
            out.domain = parse_domain(value);
          } catch (const DataError& e) {
            throw ParseError(line_no, e.what());
          }
        } else {
          throw ParseError(line_no, "unknown header field '" + key + "'");
        }
      }
      if (saw_n) {
        if (out.num_vars == 0 || out.num_vars > kMaxVars) {
          throw ParseError(line_no, "n must be between 1 and 64");
        }
        have_header = true;
      }
      continue;
    }
    if (!have_header) throw ParseError(line_no, "data before '# n=... count=...' header");
    std::istringstream tokens(line);
    std::vector<int> spins;
    std::string token;
    while (tokens >> token) {
      int value = 0;
      try {
        std::size_t used = 0;
        value = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ParseError(line_no, "not an integer: '" + token + "'");
      }
      spins.push_back(value);
    }
    if (spins.size() != out.num_vars) {
      throw ParseError(line_no, "expected " + std::to_string(out.num_vars) + " spins, found " +
                                    std::to_string(spins.size()));
    }
    try {
      out.rows.push_back(config_of(spins, out.domain));
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(line_no, "missing '# n=... count=...' header");
  if (out.rows.empty()) throw ParseError(line_no, "no samples");
  if (out.rows.size() != declared_count) {
    throw ParseError(line_no, "header declares count=" + std::to_string(declared_count) +
                                  " but file has " + std::to_string(out.rows.size()) + " rows");
  }
  return out;
}

SampleSet read_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_samples(in);
}

}  // namespace synergy
