#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdval::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kNumericalError = 3,
    kGateFailure = 4,
};

/// Runs the command line; args excludes the program name. Human-readable
/// summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

/// Parses "a:step:b" (inclusive, step > 0) or a single number.
/// Throws std::invalid_argument on malformed or empty ranges.
std::vector<double> parse_rho_grid(const std::string& text);

/// Parses "v1,v2,...". Throws std::invalid_argument on malformed input.
std::vector<double> parse_value_list(const std::string& text);

}  // namespace rdval::cli
