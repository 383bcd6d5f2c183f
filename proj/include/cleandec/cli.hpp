#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cleandec {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitBadInput = 2,
    kExitNumericalFailure = 3,
};

/// Runs one command line (without the program name) and returns its exit code.
/// Normal output goes to `out`, diagnostics and usage text to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Default tolerance: CLEANDEC_TOL when set to a positive number, else 1e-8.
double default_tolerance();

}  // namespace cleandec
