#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metareduce::cli {

enum ExitCode : int {
  kOk = 0,
  kNegative = 1,
  kUsage = 2,
  kResource = 3,
};

// Runs the command line (args excludes the program name). Output goes to
// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace metareduce::cli
