#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rentbound::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 2,
  exit_ruleset = 3,
  exit_io = 4,
  exit_estimate = 5,
};

/// Runs one subcommand. `args` excludes the program name. Environment
/// variables RENT_* fill options not given on the command line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Ruleset used when neither --ruleset nor RENT_RULESET is given.
std::string default_ruleset_path();

}  // namespace rentbound::cli
