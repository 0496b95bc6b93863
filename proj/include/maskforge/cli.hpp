#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maskforge::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,      // bug guard tripped (method disagreement, identity violation)
  kParse = 2,         // unreadable input, malformed JSON/CSV, not a dilation matrix
  kDigits = 3,        // supplied digit set invalid
  kClass = 4,         // mask not in the class the command needs
  kShape = 5,         // data shape mismatch, non-rational mask for refine
  kVerifyFailed = 6,  // --verify-only found a broken identity or class claim
};

/// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maskforge::cli
