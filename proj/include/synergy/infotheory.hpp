// Shannon entropies, (conditional) mutual information, interaction
// information and the tripartite / n-partite topological combinations.
//
// All values are in nats. Groups are sets of variable indices of the table;
// an empty group has entropy 0.
#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "synergy/distribution.hpp"

namespace synergy {

enum class Estimator { plug_in, miller_madow };

/// How a table's entropies are estimated. Miller-Madow adds (m - 1) / (2N)
/// to each marginal entropy, m being the number of occupied cells, and needs
/// the sample count N the table was estimated from.
struct EntropyOptions {
  Estimator estimator = Estimator::plug_in;
  std::size_t sample_count = 0;
};

double entropy(const ExactDistribution& dist, const IndexSet& group,
               const EntropyOptions& options = {});

/// I(A:B) = H(A) + H(B) - H(AB).
double mutual_information(const ExactDistribution& dist, const IndexSet& a, const IndexSet& b,
                          const EntropyOptions& options = {});

/// I(A:B|C) = H(AC) + H(BC) - H(C) - H(ABC).
double conditional_mutual_information(const ExactDistribution& dist, const IndexSet& a,
                                      const IndexSet& b, const IndexSet& c,
                                      const EntropyOptions& options = {});

/// I_n = sum over nonempty group subsets T of (-1)^(|T|+1) H(union of T).
double interaction_information(const ExactDistribution& dist, const PartitionSpec& partition,
                               const EntropyOptions& options = {});

/// I_n through the recursion
///   I_n(P1:...:Pn) = I_{n-1}(P1:...:P{n-1}) - I_{n-1}(P1:...:P{n-1} | Pn)
///   I_{n-1}(P1:...:P{n-1} | Pn) = I_{n-1}(P1:...:P{n-2}:P{n-1}Pn)
///                                 - I_{n-1}(P1:...:P{n-2}:Pn)
/// bottoming out at I_2 = I(A:B).
double interaction_information_recursive(const ExactDistribution& dist,
                                         const PartitionSpec& partition,
                                         const EntropyOptions& options = {});

/// S_A + S_B + S_C - S_AB - S_BC - S_AC + S_ABC.
double s_topo_kitaev_preskill(const ExactDistribution& dist, const IndexSet& a,
                              const IndexSet& b, const IndexSet& c,
                              const EntropyOptions& options = {});

/// S_ABC - S_AC - S_BC + S_C, i.e. -I(A:B|C).
double s_topo_levin_wen(const ExactDistribution& dist, const IndexSet& a, const IndexSet& b,
                        const IndexSet& c, const EntropyOptions& options = {});

/// sum_i (-1)^(i+n) sum_{|T|=i} H(union of T) = (-1)^(n-1) I_n.
double s_topo_n(const ExactDistribution& dist, const PartitionSpec& partition,
                const EntropyOptions& options = {});

enum class Quantity { entropy, mi, cmi, interaction_info, s_topo_kp, s_topo_lw, s_topo_n };

std::string to_string(Quantity quantity);
std::string to_string(Estimator estimator);

struct EntropyReport {
  Quantity quantity = Quantity::entropy;
  double value = 0.0;  // nats
  PartitionSpec partition;
  std::optional<Assignment> conditioned_on;
  Estimator estimator = Estimator::plug_in;
};

/// Evaluates `quantity` on the groups of `partition`:
///   entropy: union of all groups; mi: A|B; cmi: A|B|C meaning I(A:B|C);
///   interaction_info / s_topo_n: all groups (n >= 2);
///   s_topo_kp / s_topo_lw: A|B|C.
/// Throws UsageError when the group count does not fit the quantity.
EntropyReport evaluate(const ExactDistribution& dist, Quantity quantity,
                       const PartitionSpec& partition, const EntropyOptions& options = {});

/// JSON report; `bits` rescales the value by 1/ln 2 and sets "units".
/// Partition and condition indices are written 1-based.
nlohmann::json to_json(const EntropyReport& report, bool bits = false);

}  // namespace synergy
