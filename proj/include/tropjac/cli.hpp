#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tropjac {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_failed_check = 1,  // report: some acceptance criterion failed
  exit_invalid = 2,       // bad flags, malformed or invalid input
  exit_numeric = 3,       // non-convergence, enumeration budget, no route
};

/// Runs one subcommand; args excludes the program name. JSON goes to out,
/// diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tropjac
