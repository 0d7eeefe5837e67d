#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace anscombe::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kSolver = 3,
    kIo = 4,
};

/// Runs one command line (args[0] is the program name). Reports go to `out`;
/// failures print a JSON error object to `err` and return a nonzero code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace anscombe::cli
