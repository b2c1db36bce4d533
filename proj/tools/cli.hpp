#pragma once

#include <ostream>

namespace stance::cli {

/// Runs one subcommand. Returns 0 on success, 1 on a usage error and 2 when
/// the inputs are unreadable or invalid.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stance::cli
