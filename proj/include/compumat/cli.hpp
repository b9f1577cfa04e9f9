#pragma once

#include <iosfwd>

namespace compumat {

/// Whole command-line front end. Returns the process exit code: 0 success,
/// 1 check failed, 2 invalid input, 3 budget exhausted.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace compumat
