#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "wordent/cli/config.hpp"

namespace wordent::cli {

// Subcommand bodies. Each writes its primary table to `out` and diagnostics
// to `log`, and throws wordent::Error on bad input.
void cmd_estimate(const RunConfig& config, std::ostream& out, std::ostream& log);
void cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& log);
void cmd_variance(const RunConfig& config, std::ostream& out, std::ostream& log);
void cmd_regress(const RunConfig& config, std::ostream& out, std::ostream& log);
void cmd_aggregate(const RunConfig& config, std::ostream& out, std::ostream& log);

// Parses arguments (args[0] is the program name) and dispatches. Returns the
// process exit code: 0 on success, 2 on validation errors, 1 otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wordent::cli
