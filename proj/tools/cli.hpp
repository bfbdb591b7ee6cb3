#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace riskweave::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kComputation = 2, kIo = 3 };

/// Runs one `riskweave` command.  `args` excludes the program name.
/// `serve` blocks until SIGINT or SIGTERM.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riskweave::cli
