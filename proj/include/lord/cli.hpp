#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lord::cli {

/// Runs the command line given as argv-style arguments (program name
/// excluded). Returns the process exit code: 0 success, 1 usage error,
/// 2 data or parse error. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lord::cli
