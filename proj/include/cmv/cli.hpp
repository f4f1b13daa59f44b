#pragma once

#include <string>
#include <vector>

namespace cmv {

/// Exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitBadInput = 2,
  kExitDegenerate = 3,  // every sampled point umbilic
};

struct CliResult {
  int code = kExitOk;
  std::string out;
  std::string err;
};

/// Runs one command line (without the program name) and captures its output.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace cmv
