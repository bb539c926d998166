#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace regsimplex::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitUsage = 2,
    kExitVerifyFailed = 3,
};

/// Runs one command line. args[0] is the program name. Reports go to `out`,
/// diagnostics to `err`; input "-" reads from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace regsimplex::cli
