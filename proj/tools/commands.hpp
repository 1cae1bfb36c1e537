#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmps::cli {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kVerificationFailed = 2,
  kDivergentModel = 3,
};

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Runs one command line (without the program name). Results go to `out`,
// diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmps::cli
