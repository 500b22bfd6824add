#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tdhinf::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kNotConverged = 2,
};

/// Runs the tool with `args` (program name excluded), writing to out / err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tdhinf::cli
