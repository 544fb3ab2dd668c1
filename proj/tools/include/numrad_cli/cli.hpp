#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace numrad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInvalid = 2;

/// Runs one invocation (args excludes the program name) and returns the exit
/// code: 0 success, 1 an inequality was violated, 2 invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace numrad::cli
