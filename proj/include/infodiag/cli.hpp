#pragma once

#include <iosfwd>

namespace infodiag {

/// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

/// Runs the tool with the given arguments (argv[0] is the program name).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infodiag
