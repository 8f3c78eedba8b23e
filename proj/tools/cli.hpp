#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace obl::cli {

enum ExitCode : int { ok = 0, check_failed = 1, input_error = 2, singular = 3 };

/// Runs one `obl` invocation. Reports go to `out` unless --out is given;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace obl::cli
