#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "synergy/cli.hpp"
#include "synergy/error.hpp"
#include "synergy/interrogate.hpp"
#include "synergy/rbm.hpp"
#include "synergy/sampler.hpp"

using namespace synergy;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome lab(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& file) const { return (path / file).string(); }
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

nlohmann::json read_json(const fs::path& path) { return nlohmann::json::parse(slurp(path)); }

double estimate_value(const std::vector<std::string>& args) {
  const Outcome r = lab(args);
  REQUIRE(r.code == 0);
  return nlohmann::json::parse(r.out)["value"].get<double>();
}

void check_manifest(const fs::path& path) {
  const auto manifest = read_json(path);
  CHECK(manifest["version"] == cli::kVersion);
  CHECK(manifest["timing_seconds"].get<double>() >= 0.0);
  CHECK_FALSE(manifest["outputs"].empty());
  for (const char* key : {"inputs", "outputs"}) {
    for (const auto& entry : manifest[key]) {
      CHECK(entry["sha256"] == cli::sha256_file(entry["path"].get<std::string>()));
    }
  }
}

}  // namespace

TEST_CASE("partition and condition specs") {
  const PartitionSpec p = cli::parse_partition("1,2|3|4");
  CHECK(p == PartitionSpec{{{0, 1}, {2}, {3}}});
  CHECK(cli::format_partition(p) == "1,2|3|4");
  for (const char* text : {" 2 , 1 | 4|3 ", "1|2|3|4", "5,3,1|2"}) {
    const PartitionSpec parsed = cli::parse_partition(text);
    const std::string canonical = cli::format_partition(parsed);
    CHECK(cli::parse_partition(canonical) == parsed);
    CHECK(cli::format_partition(cli::parse_partition(canonical)) == canonical);
  }
  CHECK_THROWS_AS(cli::parse_partition("1,2|2"), UsageError);
  CHECK_THROWS_AS(cli::parse_partition("1||2"), UsageError);
  CHECK_THROWS_AS(cli::parse_partition("0|1"), UsageError);
  CHECK_THROWS_AS(cli::parse_partition("a|1"), UsageError);

  const Assignment c = cli::parse_condition("4=+1,7=-1");
  CHECK(c == Assignment{{3, 1}, {6, -1}});
  CHECK(cli::parse_condition("").empty());
  CHECK_THROWS_AS(cli::parse_condition("4"), UsageError);
  CHECK_THROWS_AS(cli::parse_condition("4=2"), UsageError);
}

TEST_CASE("sample command") {
  TempDir dir("synergy_cli_sample");
  const Outcome r = lab({"sample", "--loop", "4", "--count", "5000", "--seed", "1", "--out", dir / "tc.samples"});
  REQUIRE(r.code == 0);
  const SampleSet tc = read_samples(fs::path(dir / "tc.samples"));
  CHECK(tc.rows.size() == 5000);
  for (Config row : tc.rows) CHECK(parity(row, 0b1111) == 1);
  check_manifest(dir / "tc.samples.manifest.json");

  const Outcome iid = lab({"sample", "--iid", "4", "--count", "100", "--seed", "2"});
  REQUIRE(iid.code == 0);
  std::istringstream text(iid.out);
  const SampleSet coins = read_samples(text);
  CHECK(coins.rows.size() == 100);
  CHECK(std::any_of(coins.rows.begin(), coins.rows.end(), [](Config c) { return parity(c, 0b1111) < 0; }));
  CHECK(lab({"sample", "--iid", "4", "--count", "100", "--seed", "2"}).out == iid.out);

  const Outcome odd = lab({"sample", "--loop", "5", "--parity", "-1", "--count", "50"});
  std::istringstream odd_text(odd.out);
  for (Config row : read_samples(odd_text).rows) CHECK(parity(row, 0b11111) == -1);

  const Outcome bad = lab({"sample", "--loop", "2"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("length ≥ 3") != std::string::npos);
  CHECK(lab({"sample", "--loop", "4", "--iid", "3"}).code == 2);
  CHECK(lab({"sample"}).code == 2);
  CHECK(lab({"sample", "--loop", "4", "--parity", "2"}).code == 2);
  CHECK(lab({"bogus"}).code == 2);
}

TEST_CASE("estimate command") {
  const double tee = estimate_value({"estimate", "--exact-loop", "4", "--quantity", "in", "--partition", "1|2|3",
                                     "--condition", "4=+1", "--units", "bits"});
  CHECK(tee == doctest::Approx(-1.0).epsilon(1e-12));
  const double i4 = estimate_value(
      {"estimate", "--exact-loop", "4", "--quantity", "in", "--partition", "1|2|3|4", "--units", "bits"});
  CHECK(i4 == doctest::Approx(1.0).epsilon(1e-12));
  const double nats = estimate_value(
      {"estimate", "--exact-loop", "4", "--quantity", "kp", "--partition", "1|2|3", "--condition", "4=-1"});
  CHECK(nats == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(estimate_value({"estimate", "--exact-loop", "4", "--quantity", "mi", "--partition", "1|2",
                                 "--condition", "4=+1"})) < 1e-12);
  CHECK(estimate_value({"estimate", "--exact-loop", "4", "--quantity", "cmi", "--partition", "1|2|3",
                        "--condition", "4=+1", "--units", "bits"}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(estimate_value({"estimate", "--exact-loop", "5", "--quantity", "stopo-n", "--partition", "1|2|3,4|5",
                        "--units", "bits"}) == doctest::Approx(-1.0).epsilon(1e-12));

  const Outcome report = lab({"estimate", "--exact-loop", "4", "--quantity", "in", "--partition", "1|2|3",
                              "--condition", "4=+1"});
  const auto json = nlohmann::json::parse(report.out);
  CHECK(json["partition"] == nlohmann::json({{1}, {2}, {3}}));
  CHECK(json["units"] == "nats");
  CHECK(json.contains("conditioned_on"));

  TempDir dir("synergy_cli_estimate");
  REQUIRE(lab({"sample", "--iid", "4", "--count", "5000", "--seed", "3", "--out", dir / "iid.samples"}).code == 0);
  CHECK(std::abs(estimate_value({"estimate", "--in", dir / "iid.samples", "--quantity", "in", "--partition",
                                 "1|2|3|4"})) < 0.02);
  const double mm = estimate_value({"estimate", "--in", dir / "iid.samples", "--quantity", "entropy",
                                    "--partition", "1,2", "--estimator", "miller_madow"});
  const double plug = estimate_value(
      {"estimate", "--in", dir / "iid.samples", "--quantity", "entropy", "--partition", "1,2"});
  CHECK(mm == doctest::Approx(plug + 3.0 / 10000).epsilon(1e-12));

  CHECK(lab({"estimate", "--exact-loop", "4", "--quantity", "in", "--partition", "1,2|2"}).code == 2);
  CHECK(lab({"estimate", "--exact-loop", "4", "--quantity", "in", "--partition", "1|2|9"}).code == 2);
  CHECK(lab({"estimate", "--exact-loop", "4", "--quantity", "nope", "--partition", "1|2"}).code == 2);
  CHECK(lab({"estimate", "--exact-loop", "4", "--quantity", "in", "--partition", "1|2|4", "--condition",
             "4=+1"}).code == 2);
  // Conditioning on an event the samples never show.
  const Outcome unseen = lab({"estimate", "--in", dir / "iid.samples", "--quantity", "mi", "--partition", "1|2",
                              "--condition", "3=0"});
  CHECK(unseen.code == 3);
  CHECK(lab({"estimate", "--exact-loop", "4", "--quantity", "in", "--partition", "1|2|3", "--condition",
             "1=+1,2=+1,3=-1"}).code != 0);
  CHECK(lab({"estimate", "--in", dir / "missing.samples", "--quantity", "in", "--partition", "1|2"}).code == 3);
}

TEST_CASE("train, interrogate and rbm-sample commands") {
  TempDir dir("synergy_cli_train");
  REQUIRE(lab({"sample", "--loop", "4", "--count", "500", "--seed", "4", "--out", dir / "tc.samples"}).code == 0);

  REQUIRE(lab({"train", "--in", dir / "tc.samples", "--hidden", "3", "--epochs", "0", "--seed", "9", "--out",
               dir / "init.json"}).code == 0);
  const RbmParams init = read_params(dir / "init.json");
  Rng rng(9);
  CHECK(init == initialize_params(4, 3, SpinDomain::pm1, 0.01, rng));
  CHECK(lab({"train", "--in", dir / "tc.samples", "--hidden", "0", "--out", dir / "x.json"}).code == 2);
  CHECK(lab({"train", "--in", dir / "nothing", "--hidden", "2", "--out", dir / "x.json"}).code == 3);

  REQUIRE(lab({"train", "--in", dir / "tc.samples", "--hidden", "4", "--epochs", "30", "--seed", "2", "--out",
               dir / "p.json"}).code == 0);
  REQUIRE(lab({"train", "--in", dir / "tc.samples", "--hidden", "4", "--epochs", "30", "--seed", "2", "--out",
               dir / "q.json"}).code == 0);
  CHECK(slurp(dir / "p.json") == slurp(dir / "q.json"));
  CHECK(slurp(dir / "p.json.loss.csv").rfind("epoch,reconstruction_error\n", 0) == 0);
  check_manifest(dir / "p.json.manifest.json");
  REQUIRE(lab({"train", "--in", dir / "tc.samples", "--hidden", "2", "--epochs", "3", "--cd", "2", "--start",
               "random", "--faithful-alg1", "--out", dir / "r.json"}).code == 0);
  CHECK(lab({"train", "--in", dir / "tc.samples", "--hidden", "2", "--start", "middle", "--out",
             dir / "r.json"}).code == 2);

  const Outcome table = lab({"interrogate", "--params", dir / "p.json", "--oracle", "--out", dir / "t.json"});
  REQUIRE(table.code == 0);
  const auto t = read_json(dir / "t.json");
  CHECK(t["oracle_max_abs_diff"].get<double>() <= 1e-10);
  CHECK(t["coeffs"].size() == 16);
  check_manifest(dir / "t.json.manifest.json");
  const auto truncated = nlohmann::json::parse(lab({"interrogate", "--params", dir / "p.json", "--max-order", "1"}).out);
  CHECK(truncated["coeffs"].size() == 5);
  const auto single =
      nlohmann::json::parse(lab({"interrogate", "--params", dir / "p.json", "--subset", "1,2,3,4"}).out);
  REQUIRE(single["coeffs"].size() == 1);
  CHECK(std::abs(single["coeffs"][0]["value"].get<double>() - t["coeffs"][15]["value"].get<double>()) <= 1e-10);

  write_params(RbmParams::zeros(5, 2), dir / "zero.json");
  const auto flat = nlohmann::json::parse(lab({"interrogate", "--params", dir / "zero.json"}).out);
  for (const auto& entry : flat["coeffs"]) {
    if (!entry["subset"].empty()) CHECK(entry["value"].get<double>() == 0.0);
  }
  CHECK(lab({"interrogate", "--params", dir / "zero.json", "--cap", "4"}).code == 4);
  CHECK(lab({"interrogate", "--params", dir / "zero.json", "--cap", "4", "--subset", "1,5"}).code == 0);
  CHECK(lab({"interrogate", "--params", dir / "zero.json", "--subset", "6"}).code == 2);
  std::ofstream(dir / "broken.json") << "{\"n_visible\": 3";
  CHECK(lab({"interrogate", "--params", dir / "broken.json"}).code == 3);

  Rng zrng(5);
  RbmParams bits = RbmParams::zeros(3, 2, SpinDomain::zero_one);
  for (double& x : bits.w) x = zrng.normal();
  bits.a = {0.2, -0.4, 0.1};
  write_params(bits, dir / "bits.json");
  const auto bt = nlohmann::json::parse(lab({"interrogate", "--params", dir / "bits.json", "--oracle"}).out);
  CHECK(bt["convention"] == "zero_one_moebius");
  CHECK(bt["oracle_max_abs_diff"].get<double>() <= 1e-10);
  const auto bs = nlohmann::json::parse(lab({"interrogate", "--params", dir / "bits.json", "--subset", "1",
                                             "--subset", "1,3"}).out);
  const InteractionTable bits_table = interaction_table(bits);
  CHECK(std::abs(bs["coeffs"][0]["value"].get<double>() - bits_table.at({0})) <= 1e-12);
  CHECK(std::abs(bs["coeffs"][1]["value"].get<double>() - bits_table.at({0, 2})) <= 1e-12);

  REQUIRE(lab({"rbm-sample", "--params", dir / "p.json", "--count", "300", "--seed", "8", "--out",
               dir / "a.samples"}).code == 0);
  REQUIRE(lab({"rbm-sample", "--params", dir / "p.json", "--count", "300", "--seed", "8", "--out",
               dir / "b.samples"}).code == 0);
  CHECK(slurp(dir / "a.samples") == slurp(dir / "b.samples"));
  CHECK(read_samples(fs::path(dir / "a.samples")).rows.size() == 300);
  check_manifest(dir / "a.samples.manifest.json");
  const Outcome flat_samples = lab({"rbm-sample", "--params", dir / "zero.json", "--count", "10000", "--seed", "1"});
  std::istringstream flat_text(flat_samples.out);
  const SampleSet uniform = read_samples(flat_text);
  for (std::size_t i = 0; i < 5; ++i) {
    double up = 0.0;
    for (Config c : uniform.rows) up += ((c >> i) & 1U) ? 0.0 : 1.0;
    CHECK(std::abs(up / 10000 - 0.5) <= 0.02);
  }
  CHECK(lab({"rbm-sample", "--params", dir / "p.json", "--thin", "0"}).code == 2);
}

TEST_CASE("reproduce-fig3 is bit-reproducible") {
  TempDir first("synergy_cli_fig3_a");
  TempDir second("synergy_cli_fig3_b");
  const Outcome a = lab({"reproduce-fig3", "--seed", "3", "--outdir", first.path.string()});
  const Outcome b = lab({"reproduce-fig3", "--seed", "3", "--outdir", second.path.string()});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  for (const char* file : {"tc.samples", "params.json", "loss.csv", "rbm.samples", "counts.csv",
                           "interactions.csv", "interactions.json"}) {
    CHECK(slurp(first.path / file) == slurp(second.path / file));
  }
  check_manifest(first.path / "manifest.json");
  const auto summary = nlohmann::json::parse(a.out);
  CHECK(summary["top8_zero_flux"] == true);
  CHECK(summary["order4_abs"].get<double>() > summary["max_lower_order_abs"].get<double>());
}

TEST_CASE("executable exit codes") {
  const std::string exe = SYNERGY_LAB_EXE;
  const auto status = [&](const std::string& args) {
    const int raw = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("--version") == 0);
  CHECK(status("--help") == 0);
  CHECK(status("sample --loop 2") == 2);
  CHECK(status("estimate --in /nonexistent/file --quantity in --partition '1|2'") == 3);
  CHECK(status("estimate --exact-loop 4 --quantity in --partition '1|2|3' --condition 4=+1") == 0);
}
