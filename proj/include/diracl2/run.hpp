#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "diracl2/common.hpp"

namespace diracl2 {

// ========================== command-line engine ==========================
//
// The thin binary front end only turns argv into (command, key=value map)
// and hands it over; defaults -> config-file entries -> explicit flags are
// merged here so precedence rules live in exactly one place and tests can
// exercise the whole pipeline without spawning processes.

struct RunConfig {
  std::string command;          // verify | solve | kernel | sweep
  int n = 2;                    // number of anticommuting generators
  std::vector<Index> extents;   // nodes per axis; empty -> 33 on every axis
  std::vector<double> lows;     // empty -> [-1, 1] on every axis
  std::vector<double> highs;
  std::string weight = "quadratic0";
  std::string rhs = "bump:e0";
  double tol = 1e-10;           // solver relative-residual target
  Index maxIterations = 0;      // 0: solver default
  std::uint64_t seed = 2026;    // verify trial streams
  std::int64_t trials = 500;    // verify trials per identity
  int levels = 3;               // kernel/sweep refinement ladder depth
  double exclusion = 0.0;       // kernel: zeroed radius around the origin
  std::string output;           // optional report file path
};

struct RunResult {
  // 0 all checks passed, 1 a check failed, 2 config/usage/IO error,
  // 3 numeric failure.
  int exitCode = 0;
  // JSON report (verify/solve/kernel) or CSV ladder (sweep).  Errors come
  // back as a small JSON diagnostic.
  std::string report;
};

// Apply one key=value entry; keys are the long flag names (n, grid, domain,
// weight, rhs, tol, max-iter, seed, trials, levels, exclusion, output).
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

// Defaults, then the config file's entries, then explicit flags (which win).
// Throws config_error on unknown keys, malformed values, or unreadable file.
RunConfig resolve_config(const std::string& command,
                         const std::map<std::string, std::string>& flags,
                         const std::string& configPath);

// Runs the configured command.  Never throws: failures are folded into the
// exit code and the diagnostic report.  When cfg.output is set the report is
// also written there.
RunResult run_cli(const RunConfig& cfg);

// --------------------------- parsing helpers ---------------------------

std::vector<std::string> split(const std::string& text, char sep);

// "33,65" -> {33, 65}
std::vector<Index> parse_extent_list(const std::string& text);

// "-1:1,-2:2" -> lows {-1,-2}, highs {1,2}
void parse_domain_list(const std::string& text, std::vector<double>& lows,
                       std::vector<double>& highs);

}  // namespace diracl2
