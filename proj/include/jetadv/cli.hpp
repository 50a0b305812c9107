#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jetadv {

enum ExitCode : int { exit_ok = 0, exit_runtime = 1, exit_usage = 2 };

/// Entry point behind the `jetadv` executable. CSV goes to --out (or `out`),
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jetadv
