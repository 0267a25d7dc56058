#pragma once

// Command-line front end. Kept in the library so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "casrough/sensitivity.hpp"

namespace casrough {

inline constexpr const char* kToolName = "casrough";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitInputData = 4,
};

// Maps a library error to the CLI exit-code contract.
int exit_code_for(const class Error& error);

// Runs the CLI with argv-style arguments (args[0] is the program name).
// Data goes to out, logs and warnings to err. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Reads the CSV written by `casrough rho` back into a curve.
SensitivityCurve parse_curve_csv(std::string_view content);

}  // namespace casrough
