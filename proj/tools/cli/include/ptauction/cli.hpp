#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptauction::cli {

// Parses `args` (args[0] is the program name), runs the subcommand and
// returns the process exit code: 0 success, 1 data/runtime error, 2 usage.
// Artifacts are written only after every computation has succeeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// `tiny` -> e^-20, otherwise a positive real.
double parse_strength(const std::string& text);

}  // namespace ptauction::cli
