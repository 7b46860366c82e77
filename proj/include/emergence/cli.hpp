#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace emergence {

enum ExitStatus { exit_ok = 0, exit_error = 1, exit_budget = 2 };

// Runs one command line (without the program name). Reports go to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "command subcommand" pairs accepted by run_cli.
const std::vector<std::string>& cli_operations();

} // namespace emergence
