#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fakenews::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the `fakenews` tool. args[0] is the program name.
/// Subcommands: prepare, train, evaluate, predict, gradcheck.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fakenews::cli
