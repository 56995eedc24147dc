#pragma once

#include <iosfwd>
#include <string>

namespace schurmark::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kNotDetected = 3,
};

/// Runs the `schurmark` command line. Normal output goes to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Formats a correlation with trailing zeros trimmed, keeping one decimal
/// ("1.0", "-0.25", "0.123457").
std::string format_correlation(double value);

}  // namespace schurmark::cli
