#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scisent::cli {

// Exit codes by failure class.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // data invalid, degenerate statistics, other runtime errors
  kConfigError = 2,
  kIoError = 3,
  kAuthError = 4,
  kIdMismatch = 5,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scisent::cli
