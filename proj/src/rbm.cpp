#include "synergy/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "synergy/error.hpp"

namespace synergy {

namespace {

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x) without overflow.
double softplus(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// log(2 cosh x) without overflow.
double log_two_cosh(double x) noexcept {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

// log sum_{t in domain} exp(t x)
double log_unit_partition(SpinDomain domain, double x) noexcept {
  return domain == SpinDomain::pm1 ? log_two_cosh(x) : softplus(x);
}

double p_on(SpinDomain domain, double activation) noexcept {
  return sigmoid(domain == SpinDomain::pm1 ? 2.0 * activation : activation);
}

// E[unit | activation]
double conditional_mean(SpinDomain domain, double activation) noexcept {
  return domain == SpinDomain::pm1 ? std::tanh(activation) : sigmoid(activation);
}

double on_value(SpinDomain) noexcept { return 1.0; }
double off_value(SpinDomain domain) noexcept { return domain == SpinDomain::pm1 ? -1.0 : 0.0; }

double draw_unit(SpinDomain domain, double activation, Rng& rng) {
  return rng.uniform() < p_on(domain, activation) ? on_value(domain) : off_value(domain);
}

void check_values(const RbmParams& params, std::span<const int> values, std::size_t expected,
                  const char* layer) {
  if (values.size() != expected) {
    throw DataError(std::string(layer) + " layer has " + std::to_string(values.size()) +
                    " units, expected " + std::to_string(expected));
  }
  for (int v : values) spin_bit(params.domain, v);
}

// Row-wise helpers on double-valued layers.
void hidden_act(const RbmParams& p, const std::vector<double>& v, std::vector<double>& out) {
  out.assign(p.b.begin(), p.b.end());
  for (std::size_t i = 0; i < p.n_visible; ++i) {
    if (v[i] == 0.0) continue;
    const double* row = &p.w[i * p.n_hidden];
    for (std::size_t j = 0; j < p.n_hidden; ++j) out[j] += row[j] * v[i];
  }
}

void visible_act(const RbmParams& p, const std::vector<double>& h, std::vector<double>& out) {
  out.assign(p.a.begin(), p.a.end());
  for (std::size_t i = 0; i < p.n_visible; ++i) {
    const double* row = &p.w[i * p.n_hidden];
    double s = 0.0;
    for (std::size_t j = 0; j < p.n_hidden; ++j) s += row[j] * h[j];
    out[i] += s;
  }
}

std::vector<double> unpack(Config c, std::size_t n, SpinDomain domain) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = spin_value(domain, bit_of(c, i));
  return out;
}

Config pack(const std::vector<double>& v, SpinDomain domain) {
  Config c = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (spin_bit(domain, static_cast<int>(v[i]))) c |= Config{1} << i;
  }
  return c;
}

}  // namespace

RbmParams RbmParams::zeros(std::size_t n_visible, std::size_t n_hidden, SpinDomain domain) {
  RbmParams p;
  p.n_visible = n_visible;
  p.n_hidden = n_hidden;
  p.domain = domain;
  p.a.assign(n_visible, 0.0);
  p.b.assign(n_hidden, 0.0);
  p.w.assign(n_visible * n_hidden, 0.0);
  return p;
}

void RbmParams::validate() const {
  if (n_visible == 0 || n_hidden == 0) throw DataError("RBM layers must be nonempty");
  if (n_visible > kMaxVars) throw DataError("RBM visible layer wider than 64 units");
  if (a.size() != n_visible || b.size() != n_hidden || w.size() != n_visible * n_hidden) {
    throw DataError("RBM parameter sizes are inconsistent with n_visible x n_hidden");
  }
  const auto finite = [](const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(a) || !finite(b) || !finite(w)) throw DataError("RBM parameters must be finite");
}

double energy(const RbmParams& params, std::span<const int> visible, std::span<const int> hidden) {
  check_values(params, visible, params.n_visible, "visible");
  check_values(params, hidden, params.n_hidden, "hidden");
  double e = 0.0;
  for (std::size_t i = 0; i < params.n_visible; ++i) e -= params.a[i] * visible[i];
  for (std::size_t j = 0; j < params.n_hidden; ++j) e -= params.b[j] * hidden[j];
  for (std::size_t i = 0; i < params.n_visible; ++i) {
    for (std::size_t j = 0; j < params.n_hidden; ++j) {
      e -= params.weight(i, j) * visible[i] * hidden[j];
    }
  }
  return e;
}

std::vector<double> hidden_activation(const RbmParams& params, std::span<const int> visible) {
  check_values(params, visible, params.n_visible, "visible");
  std::vector<double> out;
  hidden_act(params, std::vector<double>(visible.begin(), visible.end()), out);
  return out;
}

std::vector<double> visible_activation(const RbmParams& params, std::span<const int> hidden) {
  check_values(params, hidden, params.n_hidden, "hidden");
  std::vector<double> out;
  visible_act(params, std::vector<double>(hidden.begin(), hidden.end()), out);
  return out;
}

std::vector<double> hidden_conditional(const RbmParams& params, std::span<const int> visible) {
  std::vector<double> act = hidden_activation(params, visible);
  for (double& x : act) x = p_on(params.domain, x);
  return act;
}

std::vector<double> visible_conditional(const RbmParams& params, std::span<const int> hidden) {
  std::vector<double> act = visible_activation(params, hidden);
  for (double& x : act) x = p_on(params.domain, x);
  return act;
}

double effective_energy(const RbmParams& params, std::span<const int> visible) {
  const std::vector<double> act = hidden_activation(params, visible);
  double h = 0.0;
  for (std::size_t i = 0; i < params.n_visible; ++i) h -= params.a[i] * visible[i];
  for (double x : act) h -= log_unit_partition(params.domain, x);
  return h;
}

double effective_energy(const RbmParams& params, Config visible) {
  const std::vector<int> spins = spins_of(visible, params.n_visible, params.domain);
  return effective_energy(params, std::span<const int>(spins));
}

ExactDistribution visible_distribution(const RbmParams& params) {
  params.validate();
  if (params.n_visible > ExactDistribution::kDenseLimit) {
    throw CapExceeded("visible layer too wide to enumerate");
  }
  const std::size_t states = std::size_t{1} << params.n_visible;
  std::vector<double> h(states);
  for (Config c = 0; c < states; ++c) h[c] = effective_energy(params, c);
  const double shift = *std::min_element(h.begin(), h.end());
  std::vector<std::pair<Config, double>> weights(states);
  for (Config c = 0; c < states; ++c) weights[c] = {c, std::exp(-(h[c] - shift))};
  return ExactDistribution(params.n_visible, weights, params.domain);
}

CdStatistics cd_statistics(const RbmParams& params, std::span<const Config> batch,
                           std::size_t cd_steps, Rng& rng, const CdOptions& options) {
  if (batch.empty()) throw DataError("empty batch");
  if (cd_steps == 0) throw UsageError("cd_steps must be at least 1");
  const std::size_t nv = params.n_visible;
  const std::size_t nh = params.n_hidden;
  const SpinDomain d = params.domain;
  const Config width = mask_of(nv);

  CdStatistics s;
  s.data_a.assign(nv, 0.0);
  s.data_b.assign(nh, 0.0);
  s.data_w.assign(nv * nh, 0.0);
  s.model_a.assign(nv, 0.0);
  s.model_b.assign(nh, 0.0);
  s.model_w.assign(nv * nh, 0.0);

  std::vector<double> act, h(nh), v(nv);
  const auto accumulate = [&](const std::vector<double>& vis, const std::vector<double>& hid,
                              std::vector<double>& sa, std::vector<double>& sb,
                              std::vector<double>& sw) {
    for (std::size_t i = 0; i < nv; ++i) sa[i] += vis[i];
    for (std::size_t j = 0; j < nh; ++j) sb[j] += hid[j];
    for (std::size_t i = 0; i < nv; ++i) {
      if (vis[i] == 0.0) continue;
      for (std::size_t j = 0; j < nh; ++j) sw[i * nh + j] += vis[i] * hid[j];
    }
  };

  for (Config row : batch) {
    if ((row & ~width) != 0) throw DataError("batch row wider than the visible layer");
    const std::vector<double> data = unpack(row, nv, d);
    hidden_act(params, data, act);
    for (std::size_t j = 0; j < nh; ++j) {
      h[j] = options.faithful_alg1 ? draw_unit(d, act[j], rng) : conditional_mean(d, act[j]);
    }
    accumulate(data, h, s.data_a, s.data_b, s.data_w);

    if (options.start == ChainStart::data) {
      v = data;
    } else {
      for (std::size_t i = 0; i < nv; ++i) v[i] = rng.uniform() < 0.5 ? on_value(d) : off_value(d);
    }
    for (std::size_t step = 0; step < cd_steps; ++step) {
      hidden_act(params, v, act);
      for (std::size_t j = 0; j < nh; ++j) h[j] = draw_unit(d, act[j], rng);
      visible_act(params, h, act);
      for (std::size_t i = 0; i < nv; ++i) v[i] = draw_unit(d, act[i], rng);
    }
    hidden_act(params, v, act);
    for (std::size_t j = 0; j < nh; ++j) h[j] = conditional_mean(d, act[j]);
    accumulate(v, h, s.model_a, s.model_b, s.model_w);
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  for (auto* vec : {&s.data_a, &s.data_b, &s.data_w, &s.model_a, &s.model_b, &s.model_w}) {
    for (double& x : *vec) x *= inv;
  }
  return s;
}

CdGradient cd_gradient(const RbmParams& params, std::span<const Config> batch,
                       std::size_t cd_steps, Rng& rng, const CdOptions& options) {
  const CdStatistics s = cd_statistics(params, batch, cd_steps, rng, options);
  CdGradient g;
  const auto diff = [](const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] - y[k];
    return out;
  };
  g.da = diff(s.data_a, s.model_a);
  g.db = diff(s.data_b, s.model_b);
  g.dw = diff(s.data_w, s.model_w);
  return g;
}

CdGradient cd_gradient(const RbmParams& params, const SampleSet& batch, std::size_t cd_steps,
                       Rng& rng, const CdOptions& options) {
  if (batch.num_vars != params.n_visible) throw DataError("batch width does not match the RBM");
  if (batch.domain != params.domain) throw DataError("batch spin domain does not match the RBM");
  return cd_gradient(params, std::span<const Config>(batch.rows), cd_steps, rng, options);
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning rate must be positive");
  }
  if (batch_size == 0) throw UsageError("batch size must be positive");
  if (cd_steps == 0) throw UsageError("cd steps must be at least 1");
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale)) {
    throw UsageError("init scale must be nonnegative");
  }
}

RbmParams initialize_params(std::size_t n_visible, std::size_t n_hidden, SpinDomain domain,
                            double init_scale, Rng& rng) {
  RbmParams p = RbmParams::zeros(n_visible, n_hidden, domain);
  for (double& x : p.w) x = init_scale * rng.normal();
  return p;
}

namespace {

double reconstruction_error(const RbmParams& p, const SampleSet& samples) {
  std::vector<double> act, h(p.n_hidden);
  double total = 0.0;
  for (Config row : samples.rows) {
    const std::vector<double> v = unpack(row, p.n_visible, p.domain);
    hidden_act(p, v, act);
    for (std::size_t j = 0; j < p.n_hidden; ++j) h[j] = conditional_mean(p.domain, act[j]);
    visible_act(p, h, act);
    for (std::size_t i = 0; i < p.n_visible; ++i) {
      const double r = v[i] - conditional_mean(p.domain, act[i]);
      total += r * r;
    }
  }
  return total / static_cast<double>(samples.rows.size() * p.n_visible);
}

}  // namespace

TrainResult train(const SampleSet& samples, std::size_t n_hidden, const TrainConfig& config) {
  if (n_hidden == 0) throw UsageError("hidden layer must have at least one unit");
  if (samples.num_vars == 0 || samples.num_vars > kMaxVars) throw DataError("bad sample width");
  if (samples.rows.empty()) throw DataError("no samples");
  config.validate();

  Rng rng(config.seed);
  TrainResult result;
  result.params = initialize_params(samples.num_vars, n_hidden, samples.domain, config.init_scale, rng);
  RbmParams& p = result.params;

  std::vector<std::size_t> order(samples.rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Config> batch;
  batch.reserve(config.batch_size);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t k = start; k < stop; ++k) batch.push_back(samples.rows[order[k]]);
      const CdGradient g = cd_gradient(p, std::span<const Config>(batch), config.cd_steps, rng, config.cd);
      for (std::size_t i = 0; i < p.a.size(); ++i) p.a[i] += config.learning_rate * g.da[i];
      for (std::size_t j = 0; j < p.b.size(); ++j) p.b[j] += config.learning_rate * g.db[j];
      for (std::size_t k = 0; k < p.w.size(); ++k) p.w[k] += config.learning_rate * g.dw[k];
    }
    result.reconstruction_error.push_back(reconstruction_error(p, samples));
  }
  p.validate();
  return result;
}

SampleSet sample_rbm(const RbmParams& params, std::size_t count, std::size_t burn_in,
                     std::size_t thinning, std::uint64_t seed) {
  params.validate();
  if (count == 0) throw UsageError("sample count must be positive");
  if (thinning == 0) throw UsageError("thinning must be at least 1");
  const SpinDomain d = params.domain;
  Rng rng(seed);
  std::vector<double> v(params.n_visible), h(params.n_hidden), act;
  for (double& x : v) x = rng.uniform() < 0.5 ? on_value(d) : off_value(d);
  const auto sweep = [&] {
    hidden_act(params, v, act);
    for (std::size_t j = 0; j < params.n_hidden; ++j) h[j] = draw_unit(d, act[j], rng);
    visible_act(params, h, act);
    for (std::size_t i = 0; i < params.n_visible; ++i) v[i] = draw_unit(d, act[i], rng);
  };
  for (std::size_t s = 0; s < burn_in; ++s) sweep();

  SampleSet out;
  out.num_vars = params.n_visible;
  out.domain = d;
  out.seed = seed;
  out.source = "rbm block-Gibbs burn_in=" + std::to_string(burn_in) +
               " thinning=" + std::to_string(thinning);
  out.rows.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    for (std::size_t s = 0; s < thinning; ++s) sweep();
    out.rows.push_back(pack(v, d));
  }
  return out;
}

nlohmann::json to_json(const RbmParams& params) {
  nlohmann::json w = nlohmann::json::array();
  for (std::size_t i = 0; i < params.n_visible; ++i) {
    w.push_back(std::vector<double>(params.w.begin() + i * params.n_hidden,
                                    params.w.begin() + (i + 1) * params.n_hidden));
  }
  return {{"n_visible", params.n_visible}, {"n_hidden", params.n_hidden},
          {"domain", to_string(params.domain)}, {"a", params.a}, {"b", params.b}, {"w", w}};
}

RbmParams params_from_json(const nlohmann::json& json) {
  RbmParams p;
  try {
    p.n_visible = json.at("n_visible").get<std::size_t>();
    p.n_hidden = json.at("n_hidden").get<std::size_t>();
    p.domain = parse_domain(json.at("domain").get<std::string>());
    p.a = json.at("a").get<std::vector<double>>();
    p.b = json.at("b").get<std::vector<double>>();
    const auto rows = json.at("w").get<std::vector<std::vector<double>>>();
    if (rows.size() != p.n_visible) throw DataError("w must have n_visible rows");
    for (const auto& row : rows) {
      if (row.size() != p.n_hidden) throw DataError("every row of w must have n_hidden entries");
      p.w.insert(p.w.end(), row.begin(), row.end());
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed RBM parameters: ") + e.what());
  }
  p.validate();
  return p;
}

void write_params(const RbmParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << to_json(params).dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

RbmParams read_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return params_from_json(json);
}

}  // namespace synergy
