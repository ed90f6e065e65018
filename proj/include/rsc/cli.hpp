#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rsc::cli {

/// Parses `args` (without the program name), runs the subcommand and returns
/// the exit status. Results go to `out` (or the files named by flags); errors
/// go to `err` as a one-line JSON object {"error", "message", ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsc::cli
