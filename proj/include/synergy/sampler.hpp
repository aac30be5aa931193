// Projective-measurement sampling via the autoregressive chain of conditionals.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "synergy/distribution.hpp"
#include "synergy/spin.hpp"

namespace synergy {

struct SampleSet {
  std::size_t num_vars = 0;
  SpinDomain domain = SpinDomain::pm1;
  std::vector<Config> rows;
  std::uint64_t seed = 0;
  std::string source;

  std::size_t count() const noexcept { return rows.size(); }

  bool operator==(const SampleSet&) const = default;
};

/// Draws `count` i.i.d. configurations, each built variable by variable:
/// sigma_{o1} from its marginal, then sigma_{o2} given sigma_{o1}, and so on
/// along `order` (natural index order when omitted). Deterministic in
/// (dist, count, seed, order).
SampleSet sample_autoregressive(const ExactDistribution& dist, std::size_t count,
                                std::uint64_t seed,
                                const std::optional<IndexSet>& order = std::nullopt);

/// Joint law induced by multiplying the chain conditionals along `order`.
ExactDistribution autoregressive_joint(const ExactDistribution& dist, const IndexSet& order);

/// Relative-frequency table of the observed configurations.
ExactDistribution empirical_distribution(const SampleSet& samples);

// Text format:
//   # n=<N> count=<C> seed=<S> source=<text>
//   # domain=zero_one            (only for 0/1 data; pm1 is the default)
//   C lines of N space-separated integers
void write_samples(const SampleSet& samples, std::ostream& out);
void write_samples(const SampleSet& samples, const std::filesystem::path& path);
SampleSet read_samples(std::istream& in);
SampleSet read_samples(const std::filesystem::path& path);

}  // namespace synergy
