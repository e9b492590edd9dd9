#pragma once

#include <iosfwd>

namespace textanchor::cli {

/// Runs one command line. Results go to `out`, diagnostics to `err`.
/// Returns 0 on success, 1 on input or parse errors and 2 on invariant
/// violations.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace textanchor::cli
