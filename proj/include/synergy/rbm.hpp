// Restricted Boltzmann machine over binary visible (sigma) and hidden (tau)
// layers with energy
//   E(sigma, tau) = -sum_i a_i sigma_i - sum_j b_j tau_j - sum_ij w_ij sigma_i tau_j
// and p(sigma, tau) = exp(-E) / Z. Both layers share one spin domain.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "synergy/distribution.hpp"
#include "synergy/rng.hpp"
#include "synergy/sampler.hpp"
#include "synergy/spin.hpp"

namespace synergy {

struct RbmParams {
  std::size_t n_visible = 0;
  std::size_t n_hidden = 0;
  SpinDomain domain = SpinDomain::pm1;
  std::vector<double> a;  // n_visible
  std::vector<double> b;  // n_hidden
  std::vector<double> w;  // row-major n_visible x n_hidden

  static RbmParams zeros(std::size_t n_visible, std::size_t n_hidden,
                         SpinDomain domain = SpinDomain::pm1);

  double weight(std::size_t i, std::size_t j) const { return w[i * n_hidden + j]; }
  double& weight(std::size_t i, std::size_t j) { return w[i * n_hidden + j]; }

  /// Throws DataError on inconsistent sizes, zero layer sizes or non-finite values.
  void validate() const;

  bool operator==(const RbmParams&) const = default;
};

double energy(const RbmParams& params, std::span<const int> visible, std::span<const int> hidden);

/// b_j + sum_i w_ij sigma_i for every hidden unit.
std::vector<double> hidden_activation(const RbmParams& params, std::span<const int> visible);

/// a_i + sum_j w_ij tau_j for every visible unit.
std::vector<double> visible_activation(const RbmParams& params, std::span<const int> hidden);

/// p(tau_j = on | sigma): sigmoid(act) for zero_one, sigmoid(2 act) for pm1,
/// "on" being 1 or +1 respectively.
std::vector<double> hidden_conditional(const RbmParams& params, std::span<const int> visible);

/// p(sigma_i = on | tau), the mirror of hidden_conditional.
std::vector<double> visible_conditional(const RbmParams& params, std::span<const int> hidden);

/// Effective visible energy H^eff(sigma) = -log sum_tau exp(-E(sigma, tau))
///   = -sum_i a_i sigma_i - sum_j log sum_{t in domain} exp(t (b_j + sum_i w_ij sigma_i)),
/// so that p(sigma) is proportional to exp(-H^eff(sigma)).
double effective_energy(const RbmParams& params, std::span<const int> visible);
double effective_energy(const RbmParams& params, Config visible);

/// Exact marginal p(sigma) by enumeration of the visible layer.
ExactDistribution visible_distribution(const RbmParams& params);

enum class ChainStart { data, random };

struct CdOptions {
  ChainStart start = ChainStart::data;
  /// Draw tau ~ p(tau|sigma) for the data statistics instead of using E[tau|sigma].
  bool faithful_alg1 = false;
};

/// Data and model expectations <sigma_i>, <tau_j>, <sigma_i tau_j> over a batch.
struct CdStatistics {
  std::vector<double> data_a, data_b, data_w;
  std::vector<double> model_a, model_b, model_w;
};

/// Unscaled ascent directions data - model for a, b and w (row-major).
struct CdGradient {
  std::vector<double> da, db, dw;
};

/// Model statistics come from `cd_steps` alternating block-Gibbs updates
/// (tau ~ p(tau|sigma), sigma ~ p(sigma|tau)) started from every batch row,
/// or from uniformly random rows with ChainStart::random; the final hidden
/// layer enters through its conditional mean. Throws DataError on an empty
/// batch or on rows of the wrong width.
CdStatistics cd_statistics(const RbmParams& params, std::span<const Config> batch,
                           std::size_t cd_steps, Rng& rng, const CdOptions& options = {});

CdGradient cd_gradient(const RbmParams& params, std::span<const Config> batch,
                       std::size_t cd_steps, Rng& rng, const CdOptions& options = {});
CdGradient cd_gradient(const RbmParams& params, const SampleSet& batch, std::size_t cd_steps,
                       Rng& rng, const CdOptions& options = {});

struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t epochs = 2000;
  std::size_t batch_size = 100;
  std::size_t cd_steps = 1;
  std::uint64_t seed = 0;
  double init_scale = 0.01;
  CdOptions cd;

  void validate() const;
};

struct TrainResult {
  RbmParams params;
  /// Mean squared mean-field reconstruction error per epoch.
  std::vector<double> reconstruction_error;
};

/// Weights ~ N(0, init_scale^2), biases 0.
RbmParams initialize_params(std::size_t n_visible, std::size_t n_hidden, SpinDomain domain,
                            double init_scale, Rng& rng);

/// Minibatch CD-n training with a constant learning rate. Rows are
/// reshuffled every epoch. Deterministic in (samples, n_hidden, config).
TrainResult train(const SampleSet& samples, std::size_t n_hidden, const TrainConfig& config);

/// Block-Gibbs chain from a uniformly random visible start; after `burn_in`
/// sweeps, every `thinning`-th visible state is recorded.
SampleSet sample_rbm(const RbmParams& params, std::size_t count, std::size_t burn_in,
                     std::size_t thinning, std::uint64_t seed);

nlohmann::json to_json(const RbmParams& params);
RbmParams params_from_json(const nlohmann::json& json);
void write_params(const RbmParams& params, const std::filesystem::path& path);
RbmParams read_params(const std::filesystem::path& path);

}  // namespace synergy
