// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hartogs {

/// Parse and execute one command line (without the program name).
/// Results go to `out` (or the file named by --out); diagnostics go to `err`.
/// Exit codes: 0 success, 2 parse error, 3 precondition violation,
/// 4 precision exhaustion.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hartogs
