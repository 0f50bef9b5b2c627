#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pathid::cli {

// Exit codes of the estimate command; other commands return kOk or kUsage.
inline constexpr int kOk = 0;
inline constexpr int kEntangled = 0;
inline constexpr int kSeparable = 1;
inline constexpr int kUsage = 2;
inline constexpr int kBoundary = 3;
inline constexpr int kFailure = 4;

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pathid::cli
