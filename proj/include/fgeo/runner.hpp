#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgeo/config.hpp"

namespace fgeo {

struct RunResult {
  int exit_code = 0;
  std::vector<std::pair<std::string, std::string>> summary;
};

/// Command-line flags that take precedence over config keys.
struct CliOverrides {
  std::optional<std::string> out;
  std::optional<unsigned long long> seed;
  std::optional<double> tol;
};

/// Executes one subcommand: writes CSV artifacts and `summary.txt` into the
/// configured output directory, returns exit code 0 iff every requested check
/// passed its tolerance. Deterministic for a fixed config + seed.
RunResult run(const RunConfig& cfg);

/// Parse text, apply overrides, run. Maps errors to exit code 2 with a
/// diagnostic on stderr.
int run_from_text(const std::string& config_text, const std::string& subcommand,
                  const CliOverrides& overrides = {});

}  // namespace fgeo
