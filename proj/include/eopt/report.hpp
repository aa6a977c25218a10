#pragma once

#include "eopt/json_io.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace eopt {

inline constexpr std::string_view kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

struct RunOptions {
  std::optional<std::string> cache_dir;
  /// Overrides params.threads; never part of the digest.
  std::optional<int> threads;
  bool verbose = false;
  /// Replaces the config's "experiment" before anything else happens.
  std::optional<std::string> experiment;
};

struct RunOutcome {
  /// Body fields plus "meta" (wall time, cache flag, body hash).
  json_io::Json report;
  /// Empty when the experiment has no series.
  std::string series_csv;
  int exit_code;
};

/// SHA-256 of the canonical config (without "out" and params.threads) and
/// the tool version, in hex.
std::string config_digest(const json_io::Json& config);

/// SHA-256 of the report with its "meta" member removed, in hex.
std::string body_hash(const json_io::Json& report);

/// Validates and runs one experiment. Never throws for bad input: failures
/// become an error report with a machine-readable code and exit status.
RunOutcome execute(const json_io::Json& config, const RunOptions& options, std::ostream& log);

/// Parses `text` first; malformed JSON yields a ParseError report.
RunOutcome execute_text(std::string_view text, const RunOptions& options, std::ostream& log);

/// Reads the config file, runs it, writes the report (to `out_path`, else
/// out.report from the config, else stdout) and the series CSV (out.series,
/// else the report path with a .csv extension). Returns the exit status.
int run(const std::string& config_path, const std::optional<std::string>& out_path, const RunOptions& options,
        std::ostream& log);

}  // namespace eopt
