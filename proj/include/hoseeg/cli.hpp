#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hoseeg/error.hpp"

namespace hoseeg::cli {

/// Process exit codes, one per failure category.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,        // unknown flag, missing argument, bad flag syntax
  kConfig = 3,       // value out of range, unknown config key
  kIo = 4,           // missing or unwritable file
  kData = 5,         // malformed or unusable input
  kConvergence = 6,  // solver did not converge
};

int exit_code(ErrorKind kind);

/// Runs one `hoseeg` invocation; `args` excludes the program name. Failures
/// print a single line `error kind=<kind>: <message>` to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hoseeg::cli
