#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bdelta::cli {

/// Exit status contract of the `bd-delta` tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;  ///< parse or compute failure
inline constexpr int kExitLint = 2;   ///< error-severity lint, or any warning under --strict
inline constexpr int kExitUsage = 64;

struct Environment {
  bool no_color = false;
  bool color_capable = false;
};

/// Reads BD_DELTA_NO_COLOR and whether stderr is a terminal.
Environment environment_from_process();

/// Runs one command. `args` excludes the program name. The report goes to
/// `out`, lints and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = {});

}  // namespace bdelta::cli
