#pragma once

#include <iosfwd>

namespace imog::cli {

/// Runs one command. Payload goes to `out`, diagnostics and usage to `err`.
/// Returns 0 without Error diagnostics, 1 with, 2 on usage or I/O problems.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace imog::cli
