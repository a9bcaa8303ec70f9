#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qsafe::cli {

// Runs one command line (args excludes the program name). Returns 0 on
// success, 1 when an input fails validation, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsafe::cli
