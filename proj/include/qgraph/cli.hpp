#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace qgraph::cli {

/// Dispatches a subcommand; returns the process exit status
/// (0 ok, 1 input error, 2 assertion failure).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgraph::cli
