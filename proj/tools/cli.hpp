#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heckelab::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kCheckFailed = 2 };

/// Parses `args` (without the program name) and runs one subcommand.
/// Results go to --out (plus a manifest next to it) or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heckelab::cli
