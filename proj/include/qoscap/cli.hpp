#pragma once

#include <string>
#include <vector>

namespace qoscap::cli {

/// Runs the command-line front end. Returns the process exit code:
/// 0 success, 2 validation error, 3 numeric-solver failure.
int run(int argc, const char* const* argv);

/// Convenience overload for tests; args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace qoscap::cli
