#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clarirank {

/// Entry point behind the `clarirank` binary: subcommands index, rank, eval,
/// grid. Returns the process exit code; 0 iff the command completed.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a grid expression: "start:stop:step" (stop included when reachable
/// within 1e-12) or a comma-separated value list. Throws Error on degenerate
/// input.
std::vector<double> parse_grid_expression(const std::string& expr);

}  // namespace clarirank
