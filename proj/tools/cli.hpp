#pragma once

#include <iosfwd>

namespace sbf::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumeric = 4;

/// Runs the command line tool with the given arguments (argv[0] is the
/// program name). Output and diagnostics go to the supplied streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sbf::cli
