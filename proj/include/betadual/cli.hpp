#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace betadual {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Parses `args` (without the program name), runs one subcommand and writes
/// the report to `out` or to the --out path. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace betadual
