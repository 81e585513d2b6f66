#pragma once

#include <iosfwd>

namespace lolb::cli {

/// Full command-line entry point. Exit codes: 0 success, 1 verification
/// found an unsound bound, 2 schema/usage error, 3 precondition error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lolb::cli
