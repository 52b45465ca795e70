#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bnhard {

// Exit statuses of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;    // the answer is "no" where a check was asked for
inline constexpr int kExitBadInput = 2;  // malformed arguments or files

// Runs one command line (without the program name). Reports go to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bnhard
