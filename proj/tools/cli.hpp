#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace invexp::cli {

/// Runs one command line (args exclude the program name). Returns the exit
/// code: 0 when no FAIL line was printed, 1 otherwise, 2 on errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace invexp::cli
