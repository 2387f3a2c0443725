#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace freeholo {

/// Runs the command-line front end on `args` (program name excluded).
/// Returns 0 on success, 1 on a mathematical failure, 2 on input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freeholo
