#pragma once

// skeinctl: subcommand dispatch and JSON reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skl/heegaard.hpp"
#include "skl/io.hpp"

namespace skl {

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::optional<std::string> heegaard;  // product: Heegaard file for the signed product
  std::string zeta = "symbolic";        // symbolic, -1, 1, i, -i
  std::optional<std::size_t> max_crossings;
  int truncation = 2;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::string out;  // empty: stdout
  SlideBounds bounds;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 verification failure, 2 input error
  Json report;        // null on input error
  std::string diagnostic;
};

Json config_to_json(const RunConfig& cfg);

/// Runs one subcommand without touching the filesystem except to read inputs.
RunResult execute(const RunConfig& cfg);

/// argv front end: parses flags, runs, writes the report to --out or stdout
/// and diagnostics to stderr. Returns the exit code.
int run_cli(int argc, char** argv);

}  // namespace skl
