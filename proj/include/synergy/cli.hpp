// Command-line front end: sample, estimate, train, interrogate, rbm-sample,
// reproduce-fig3.
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "synergy/distribution.hpp"

namespace synergy::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kCap = 4 };

/// "1,2|3|4" -> {{0,1},{2},{3}}. Indices are 1-based in the text.
PartitionSpec parse_partition(std::string_view text);

/// Canonical text form: groups in the given order, indices sorted.
std::string format_partition(const PartitionSpec& partition);

/// "4=+1,7=-1" -> {{3,+1},{6,-1}}.
Assignment parse_condition(std::string_view text);

std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::string version = kVersion;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  double timing_seconds = 0.0;

  /// Hashes every listed file at call time.
  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

/// Runs one command line (args excludes the program name). Reports go to
/// `out`, diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace synergy::cli
