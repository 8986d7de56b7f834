#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stk {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitDivergence = 4;
inline constexpr int kExitIo = 5;

// Runs one `stk` subcommand. args excludes the program name. Human-readable
// output goes to `out`, diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stk
