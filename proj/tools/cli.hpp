#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigflow {

/// Runs one CLI invocation. `args` excludes the program name. Input files
/// named "-" (or omitted) are read from `in`. Returns the process exit code:
/// 0 on success or a true answer, 1 on a false answer or nothing found, 2 on
/// error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace sigflow
