#include "synergy/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "synergy/error.hpp"
#include "synergy/infotheory.hpp"
#include "synergy/interrogate.hpp"
#include "synergy/lattice_model.hpp"
#include "synergy/rbm.hpp"
#include "synergy/rng.hpp"
#include "synergy/sampler.hpp"

namespace synergy::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    out.push_back(trim(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::size_t parse_index(const std::string& token) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (token.empty() || used != token.size() || value < 1 || value > static_cast<long>(kMaxVars)) {
    throw UsageError("bad variable index '" + token + "' (expected 1.." + std::to_string(kMaxVars) + ")");
  }
  return static_cast<std::size_t>(value - 1);
}

}  // namespace

PartitionSpec parse_partition(std::string_view text) {
  if (trim(text).empty()) throw UsageError("empty partition spec");
  PartitionSpec partition;
  std::set<std::size_t> seen;
  for (const std::string& group_text : split(text, '|')) {
    if (group_text.empty()) throw UsageError("empty group in partition spec '" + std::string(text) + "'");
    IndexSet group;
    for (const std::string& token : split(group_text, ',')) {
      const std::size_t index = parse_index(token);
      if (!seen.insert(index).second) {
        throw UsageError("partition groups overlap at index " + std::to_string(index + 1));
      }
      group.push_back(index);
    }
    std::sort(group.begin(), group.end());
    partition.groups.push_back(std::move(group));
  }
  return partition;
}

std::string format_partition(const PartitionSpec& partition) {
  std::string out;
  for (std::size_t g = 0; g < partition.groups.size(); ++g) {
    if (g) out += '|';
    IndexSet group = partition.groups[g];
    std::sort(group.begin(), group.end());
    for (std::size_t k = 0; k < group.size(); ++k) {
      if (k) out += ',';
      out += std::to_string(group[k] + 1);
    }
  }
  return out;
}

Assignment parse_condition(std::string_view text) {
  Assignment out;
  if (trim(text).empty()) return out;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("bad condition '" + item + "' (expected index=value)");
    const std::size_t index = parse_index(trim(item.substr(0, eq)));
    const std::string value = trim(item.substr(eq + 1));
    int spin = 0;
    if (value == "+1" || value == "1") {
      spin = 1;
    } else if (value == "-1") {
      spin = -1;
    } else if (value == "0") {
      spin = 0;
    } else {
      throw UsageError("bad spin value '" + value + "' in condition");
    }
    out.emplace_back(index, spin);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 initialisation failed");
  }
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);
  std::ostringstream hex;
  for (unsigned int k = 0; k < length; ++k) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  }
  return hex.str();
}

nlohmann::json RunManifest::to_json() const {
  const auto listing = [](const std::vector<std::filesystem::path>& paths) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& p : paths) list.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
    return list;
  };
  return {{"command", command},     {"version", version},
          {"seed", seed},           {"inputs", listing(inputs)},
          {"outputs", listing(outputs)}, {"timing_seconds", timing_seconds}};
}

void RunManifest::write(const std::filesystem::path& path) const {
  const nlohmann::json json = to_json();
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << json.dump(2) << '\n';
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

std::string join_args(const std::vector<std::string>& args) {
  std::string out = "synergy_lab";
  for (const auto& a : args) out += " " + a;
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

Quantity parse_quantity(const std::string& text) {
  static const std::map<std::string, Quantity> table = {
      {"entropy", Quantity::entropy},   {"mi", Quantity::mi},
      {"cmi", Quantity::cmi},           {"in", Quantity::interaction_info},
      {"kp", Quantity::s_topo_kp},      {"lw", Quantity::s_topo_lw},
      {"stopo-n", Quantity::s_topo_n}};
  const auto it = table.find(text);
  if (it == table.end()) throw UsageError("unknown quantity '" + text + "'");
  return it->second;
}

std::string config_text(Config c, std::size_t n, SpinDomain domain) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    const int v = spin_value(domain, bit_of(c, i));
    if (i) out += ' ';
    out += (domain == SpinDomain::pm1 && v > 0) ? "+1" : std::to_string(v);
  }
  return out;
}

std::string subset_text(const IndexSet& subset) {
  std::string out;
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(subset[k] + 1);
  }
  return out;
}

std::string format_double(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

// --- sample ---------------------------------------------------------------

struct SampleArgs {
  std::optional<std::size_t> loop;
  std::optional<std::size_t> iid;
  int parity = 1;
  std::string basis = "z";
  std::size_t count = 5000;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_sample(const SampleArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  const auto start = Clock::now();
  if (a.loop.has_value() == a.iid.has_value()) throw UsageError("give exactly one of --loop or --iid");
  ExactDistribution dist = [&] {
    if (a.loop) {
      LoopModel model{*a.loop, a.parity, a.basis == "x" ? Basis::x : Basis::z};
      return tc_loop_distribution(model);
    }
    return iid_coin_distribution(*a.iid);
  }();
  SampleSet samples = sample_autoregressive(dist, a.count, a.seed);
  samples.source = a.loop ? "tc-loop L=" + std::to_string(*a.loop) + " parity=" +
                                (a.parity > 0 ? "+1" : "-1") + " basis=" + a.basis
                          : "iid n=" + std::to_string(*a.iid);
  if (a.out.empty()) {
    write_samples(samples, out);
    return kOk;
  }
  write_samples(samples, std::filesystem::path(a.out));
  RunManifest manifest{join_args(argv), kVersion, a.seed, {}, {a.out}, seconds_since(start)};
  manifest.write(manifest_path(a.out));
  return kOk;
}

// --- estimate -------------------------------------------------------------

struct EstimateArgs {
  std::string in;
  std::optional<std::size_t> exact_loop;
  int parity = 1;
  std::string quantity;
  std::string partition;
  std::string condition;
  std::string units = "nats";
  std::string estimator = "plug_in";
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  if (a.in.empty() == !a.exact_loop.has_value()) throw UsageError("give exactly one of --in or --exact-loop");
  const Quantity quantity = parse_quantity(a.quantity);
  EntropyOptions options;
  if (a.estimator == "miller_madow") {
    options.estimator = Estimator::miller_madow;
  } else if (a.estimator != "plug_in") {
    throw UsageError("unknown estimator '" + a.estimator + "'");
  }
  if (options.estimator == Estimator::miller_madow && a.in.empty()) {
    throw UsageError("Miller-Madow needs sampled input (--in)");
  }

  std::optional<ExactDistribution> dist;
  if (a.exact_loop) {
    dist.emplace(tc_loop_distribution(LoopModel{*a.exact_loop, a.parity, Basis::z}));
  } else {
    const SampleSet samples = read_samples(std::filesystem::path(a.in));
    options.sample_count = samples.count();
    dist.emplace(empirical_distribution(samples));
  }

  const PartitionSpec partition = parse_partition(a.partition);
  partition.validate(dist->num_vars());
  const Assignment assignment = parse_condition(a.condition);

  // Conditioning drops assigned variables; renumber partition indices onto the survivors.
  PartitionSpec local = partition;
  if (!assignment.empty()) {
    std::set<std::size_t> fixed;
    for (const auto& [index, value] : assignment) fixed.insert(index);
    for (const auto& group : partition.groups) {
      for (std::size_t v : group) {
        if (fixed.count(v)) {
          throw UsageError("variable " + std::to_string(v + 1) + " is both conditioned and partitioned");
        }
      }
    }
    std::vector<std::size_t> renumber(dist->num_vars());
    std::size_t next = 0;
    for (std::size_t v = 0; v < dist->num_vars(); ++v) {
      if (!fixed.count(v)) renumber[v] = next++;
    }
    for (auto& group : local.groups) {
      for (auto& v : group) v = renumber[v];
    }
    dist.emplace(condition(*dist, assignment));
  }

  EntropyReport report = evaluate(*dist, quantity, local, options);
  report.partition = partition;
  if (!assignment.empty()) report.conditioned_on = assignment;
  if (a.units != "nats" && a.units != "bits") throw UsageError("units must be nats or bits");
  out << to_json(report, a.units == "bits").dump() << '\n';
  return kOk;
}

// --- train ----------------------------------------------------------------

struct TrainArgs {
  std::string in;
  std::size_t hidden = 0;
  TrainConfig config;
  std::string start = "data";
  std::string out;
};

std::string loss_csv(const std::vector<double>& trace) {
  std::string text = "epoch,reconstruction_error\n";
  for (std::size_t e = 0; e < trace.size(); ++e) {
    text += std::to_string(e + 1) + "," + format_double(trace[e]) + "\n";
  }
  return text;
}

int cmd_train(TrainArgs a, const std::vector<std::string>& argv) {
  const auto start = Clock::now();
  if (a.hidden == 0) throw UsageError("--hidden must be at least 1");
  if (a.start == "random") {
    a.config.cd.start = ChainStart::random;
  } else if (a.start != "data") {
    throw UsageError("--start must be data or random");
  }
  const SampleSet samples = read_samples(std::filesystem::path(a.in));
  const TrainResult result = train(samples, a.hidden, a.config);
  write_params(result.params, a.out);
  const std::string loss_path = a.out + ".loss.csv";
  write_text(loss_path, loss_csv(result.reconstruction_error));
  RunManifest manifest{join_args(argv), kVersion, a.config.seed, {a.in}, {a.out, loss_path},
                       seconds_since(start)};
  manifest.write(manifest_path(a.out));
  return kOk;
}

// --- interrogate ----------------------------------------------------------

struct InterrogateArgs {
  std::string params;
  std::optional<std::size_t> max_order;
  std::string out;
  bool oracle = false;
  std::vector<std::string> subsets;
  std::size_t cap = kDefaultTableCap;
};

int cmd_interrogate(const InterrogateArgs& a, const std::vector<std::string>& argv,
                    std::ostream& out) {
  const auto start = Clock::now();
  const RbmParams params = read_params(a.params);
  nlohmann::json report;
  if (!a.subsets.empty()) {
    // Per-subset closed form, no size cap.
    InteractionTable table;
    table.n_visible = params.n_visible;
    table.convention = params.domain == SpinDomain::pm1 ? Convention::pm1_parity
                                                         : Convention::zero_one_moebius;
    for (const std::string& text : a.subsets) {
      IndexSet subset;
      if (!trim(text).empty()) {
        for (const std::string& token : split(text, ',')) subset.push_back(parse_index(token));
      }
      std::sort(subset.begin(), subset.end());
      double value = 0.0;
      if (params.domain == SpinDomain::pm1) {
        value = interaction_pm1(params, subset);
      } else {
        // Energy convention: -K coefficient, minus a_k on singletons.
        if (subset.empty()) throw UsageError("constant term needs the full table");
        value = -interaction_zero_one(params, subset);
        if (subset.size() == 1) value -= params.a.at(subset[0]);
      }
      table.coeffs[subset] = value;
    }
    report = to_json(table, a.max_order);
  } else {
    const InteractionTable table = interaction_table(params, a.cap);
    report = to_json(table, a.max_order);
    if (a.oracle) {
      const std::vector<double> values = effective_energy_table(params, a.cap);
      const InteractionTable truth = params.domain == SpinDomain::pm1
                                         ? oracle_parity_coefficients(values)
                                         : oracle_moebius_coefficients(values);
      double worst = 0.0;
      for (const auto& [subset, value] : table.coeffs) {
        worst = std::max(worst, std::abs(value - truth.at(subset)));
        if (params.domain == SpinDomain::pm1 && params.n_visible <= 12) {
          worst = std::max(worst, std::abs(value - interaction_pm1(params, subset)));
        }
      }
      report["oracle_max_abs_diff"] = worst;
    }
  }
  if (a.out.empty()) {
    out << report.dump(2) << '\n';
    return kOk;
  }
  write_text(a.out, report.dump(2) + "\n");
  RunManifest manifest{join_args(argv), kVersion, 0, {a.params}, {a.out}, seconds_since(start)};
  manifest.write(manifest_path(a.out));
  return kOk;
}

// --- rbm-sample -----------------------------------------------------------

struct RbmSampleArgs {
  std::string params;
  std::size_t count = 10000;
  std::size_t burn_in = 1000;
  std::size_t thin = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_rbm_sample(const RbmSampleArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  const auto start = Clock::now();
  const RbmParams params = read_params(a.params);
  SampleSet samples = sample_rbm(params, a.count, a.burn_in, a.thin, a.seed);
  if (a.out.empty()) {
    write_samples(samples, out);
    return kOk;
  }
  write_samples(samples, std::filesystem::path(a.out));
  RunManifest manifest{join_args(argv), kVersion, a.seed, {a.params}, {a.out}, seconds_since(start)};
  manifest.write(manifest_path(a.out));
  return kOk;
}

// --- reproduce-fig3 -------------------------------------------------------

struct Fig3Args {
  std::uint64_t seed = 1;
  std::string outdir = "fig3";
};

int cmd_reproduce_fig3(const Fig3Args& a, const std::vector<std::string>& argv, std::ostream& out) {
  const auto start = Clock::now();
  namespace fs = std::filesystem;
  const fs::path dir(a.outdir);
  fs::create_directories(dir);

  std::uint64_t seeder = a.seed;
  const std::uint64_t sample_seed = splitmix64(seeder);
  const std::uint64_t train_seed = splitmix64(seeder);
  const std::uint64_t gibbs_seed = splitmix64(seeder);

  constexpr std::size_t kLoop = 4;
  constexpr std::size_t kSamples = 5000;
  constexpr std::size_t kHidden = 6;
  constexpr std::size_t kRbmSamples = 10000;
  constexpr std::size_t kBurnIn = 1000;
  constexpr std::size_t kThin = 10;

  SampleSet samples = sample_autoregressive(tc_loop_distribution(LoopModel{kLoop, 1, Basis::z}),
                                            kSamples, sample_seed);
  samples.source = "tc-loop L=4 parity=+1 basis=z";
  const fs::path samples_path = dir / "tc.samples";
  write_samples(samples, samples_path);

  TrainConfig config;
  config.seed = train_seed;
  const TrainResult trained = train(samples, kHidden, config);
  const fs::path params_path = dir / "params.json";
  write_params(trained.params, params_path);
  const fs::path loss_path = dir / "loss.csv";
  write_text(loss_path, loss_csv(trained.reconstruction_error));

  const SampleSet rbm_samples = sample_rbm(trained.params, kRbmSamples, kBurnIn, kThin, gibbs_seed);
  const fs::path rbm_samples_path = dir / "rbm.samples";
  write_samples(rbm_samples, rbm_samples_path);

  // Configuration counts from the trained machine.
  std::vector<std::pair<Config, std::size_t>> counts;
  for (Config c = 0; c < (Config{1} << kLoop); ++c) counts.emplace_back(c, 0);
  for (Config row : rbm_samples.rows) ++counts[row].second;
  std::stable_sort(counts.begin(), counts.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  std::string counts_csv = "rank,config,flux,count,frequency\n";
  std::size_t zero_flux_total = 0;
  bool top8_zero_flux = true;
  for (std::size_t r = 0; r < counts.size(); ++r) {
    const auto [config, n] = counts[r];
    const int flux = parity(config, mask_of(kLoop));
    if (flux > 0) zero_flux_total += n;
    if (r < 8 && flux < 0) top8_zero_flux = false;
    counts_csv += std::to_string(r + 1) + "," + config_text(config, kLoop, SpinDomain::pm1) + "," +
                  (flux > 0 ? "+1" : "-1") + "," + std::to_string(n) + "," +
                  format_double(static_cast<double>(n) / kRbmSamples) + "\n";
  }
  const fs::path counts_path = dir / "counts.csv";
  write_text(counts_path, counts_csv);

  // Effective interactions by order.
  const InteractionTable table = interaction_table_pm1(trained.params);
  std::string inter_csv = "order,subset,value,abs_value\n";
  for (const auto& [subset, value] : table.coeffs) {
    if (subset.empty()) continue;
    inter_csv += std::to_string(subset.size()) + "," + subset_text(subset) + "," +
                 format_double(value) + "," + format_double(std::abs(value)) + "\n";
  }
  const fs::path inter_path = dir / "interactions.csv";
  write_text(inter_path, inter_csv);
  const fs::path table_path = dir / "interactions.json";
  write_text(table_path, to_json(table).dump(2) + "\n");

  double lower = 0.0;
  for (std::size_t r = 1; r < kLoop; ++r) lower = std::max(lower, table.max_abs_of_order(r));
  const double top = std::abs(table.at({0, 1, 2, 3}));

  RunManifest manifest{join_args(argv), kVersion, a.seed, {},
                       {samples_path, params_path, loss_path, rbm_samples_path, counts_path,
                        inter_path, table_path},
                       seconds_since(start)};
  manifest.write(dir / "manifest.json");

  const nlohmann::json summary = {
      {"zero_flux_fraction", static_cast<double>(zero_flux_total) / kRbmSamples},
      {"top8_zero_flux", top8_zero_flux},
      {"order4_abs", top},
      {"max_lower_order_abs", lower},
      {"outdir", dir.string()}};
  out << summary.dump() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synergy lab: Wilson-loop sampling, higher-order mutual information and RBM interrogation",
               "synergy_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Draw projective samples from a loop or iid model");
  auto* loop_opt = sample->add_option("--loop", sample_args.loop, "Wilson-loop length L");
  auto* iid_opt = sample->add_option("--iid", sample_args.iid, "Number of independent fair coins");
  loop_opt->excludes(iid_opt);
  sample->add_option("--parity", sample_args.parity, "Loop flux (+1 ground state)")
      ->check(CLI::IsMember({1, -1}));
  sample->add_option("--basis", sample_args.basis, "Measurement basis label")
      ->check(CLI::IsMember({"z", "x"}));
  sample->add_option("--count", sample_args.count, "Number of samples");
  sample->add_option("--seed", sample_args.seed, "PRNG seed");
  sample->add_option("--out", sample_args.out, "Output sample file (stdout if omitted)");

  EstimateArgs est_args;
  auto* estimate = app.add_subcommand("estimate", "Information quantities over a partition");
  auto* in_opt = estimate->add_option("--in", est_args.in, "Sample file");
  auto* exact_opt = estimate->add_option("--exact-loop", est_args.exact_loop, "Use the exact loop law of length L");
  in_opt->excludes(exact_opt);
  estimate->add_option("--parity", est_args.parity, "Flux of the exact loop")->check(CLI::IsMember({1, -1}));
  estimate->add_option("--quantity", est_args.quantity, "entropy|mi|cmi|in|kp|lw|stopo-n")->required();
  estimate->add_option("--partition", est_args.partition, "Groups, e.g. \"1,2|3|4\"")->required();
  estimate->add_option("--condition", est_args.condition, "Fixed spins, e.g. \"4=+1\"");
  estimate->add_option("--units", est_args.units, "nats|bits");
  estimate->add_option("--estimator", est_args.estimator, "plug_in|miller_madow");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train an RBM with CD-n");
  train_cmd->add_option("--in", train_args.in, "Sample file")->required();
  train_cmd->add_option("--hidden", train_args.hidden, "Hidden units")->required();
  train_cmd->add_option("--lr", train_args.config.learning_rate, "Learning rate");
  train_cmd->add_option("--epochs", train_args.config.epochs, "Epochs");
  train_cmd->add_option("--batch", train_args.config.batch_size, "Minibatch size");
  train_cmd->add_option("--cd", train_args.config.cd_steps, "Gibbs steps per CD update");
  train_cmd->add_option("--seed", train_args.config.seed, "PRNG seed");
  train_cmd->add_option("--init-scale", train_args.config.init_scale, "Std of initial weights");
  train_cmd->add_option("--start", train_args.start, "Model chain start: data|random");
  train_cmd->add_flag("--faithful-alg1", train_args.config.cd.faithful_alg1,
                      "Sample hidden units for the data statistics");
  train_cmd->add_option("--out", train_args.out, "Output params JSON")->required();

  InterrogateArgs inter_args;
  auto* interrogate = app.add_subcommand("interrogate", "Effective n-body couplings of an RBM");
  interrogate->add_option("--params", inter_args.params, "Params JSON")->required();
  interrogate->add_option("--max-order", inter_args.max_order, "Highest order written");
  interrogate->add_option("--out", inter_args.out, "Output table JSON (stdout if omitted)");
  interrogate->add_flag("--oracle", inter_args.oracle, "Cross-check against brute force");
  interrogate->add_option("--subset", inter_args.subsets, "Only these subsets, e.g. \"1,2,3,4\"");
  interrogate->add_option("--cap", inter_args.cap, "Largest n_visible for full tables");

  RbmSampleArgs rbm_args;
  auto* rbm_sample = app.add_subcommand("rbm-sample", "Block-Gibbs samples from a trained RBM");
  rbm_sample->add_option("--params", rbm_args.params, "Params JSON")->required();
  rbm_sample->add_option("--count", rbm_args.count, "Number of samples");
  rbm_sample->add_option("--burn-in", rbm_args.burn_in, "Burn-in sweeps");
  rbm_sample->add_option("--thin", rbm_args.thin, "Sweeps between recorded samples");
  rbm_sample->add_option("--seed", rbm_args.seed, "PRNG seed");
  rbm_sample->add_option("--out", rbm_args.out, "Output sample file (stdout if omitted)");

  Fig3Args fig3_args;
  auto* fig3 = app.add_subcommand("reproduce-fig3", "End-to-end plaquette experiment");
  fig3->add_option("--seed", fig3_args.seed, "Master seed");
  fig3->add_option("--outdir", fig3_args.outdir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*sample) return cmd_sample(sample_args, args, out);
    if (*estimate) return cmd_estimate(est_args, out);
    if (*train_cmd) return cmd_train(train_args, args);
    if (*interrogate) return cmd_interrogate(inter_args, args, out);
    if (*rbm_sample) return cmd_rbm_sample(rbm_args, args, out);
    if (*fig3) return cmd_reproduce_fig3(fig3_args, args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kCap;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace synergy::cli
