#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace xi::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,        ///< malformed command line
    kValidation = 2,   ///< invalid values (set spec, sizes, scales)
    kStatistical = 3,  ///< zero survivors, failed fit
    kIo = 4,           ///< output files could not be written
    kInternal = 5,
};

/// Runs the `xi` command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a nonnegative integer count; accepts exact decimal or scientific
/// forms such as "100000", "1e7" or "2.6e9".
std::uint64_t parse_count(const std::string& text, const std::string& what);

/// Parses "a:b" into a pair of numbers.
std::pair<double, double> parse_pair(const std::string& text, const std::string& what);

/// Parses "start:stop:step" into the grid start, start + step, ... <= stop.
std::vector<double> parse_grid(const std::string& text);

}  // namespace xi::cli
