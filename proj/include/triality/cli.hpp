#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace triality::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kInvalidInput = 3,
};

/// Runs one subcommand (eval | roof | sweep | interf | check | gen). `args`
/// excludes the program name. Reports go to the --out file or to `out`;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

/// "2..6", "2,3,5" or "4"; every entry must lie in [2, 16].
std::vector<std::size_t> parse_dims(const std::string& text);

}  // namespace triality::cli
