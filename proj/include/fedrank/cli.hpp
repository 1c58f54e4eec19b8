#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fedrank {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitInternal = 2 };

/// Entry point of the `fedrank` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fedrank
