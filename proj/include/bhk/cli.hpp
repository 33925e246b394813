#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bhk {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInputError = 2 };

/// Runs one `bhk` command. The JSON result document goes to `out`,
/// diagnostics to `err`. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace bhk
