#pragma once

#include <ostream>

namespace levy3d::cli {

enum ExitCode : int { ok = 0, usage = 2, degenerate = 3, validation_failed = 4 };

/// Runs the command line. Reports go to `out` unless an --out path is given;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace levy3d::cli
