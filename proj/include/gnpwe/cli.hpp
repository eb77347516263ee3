#pragma once

// Command-line front end. Exit codes: 0 success, 1 domain error, 2 usage
// error (bad flags, malformed rationals or expressions, b = 0).

#include <iosfwd>
#include <string>
#include <vector>

namespace gnpwe::cli {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gnpwe::cli
