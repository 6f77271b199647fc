#pragma once

#include <ostream>

namespace kec {

/// Command-line entry point.  Returns 0 when every enabled suite passes,
/// 1 on a suite failure and 2 on a configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kec
