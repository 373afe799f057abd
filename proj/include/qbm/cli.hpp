#pragma once
// Command-line surface.  One subcommand per library operation group:
// local (solvability over R and Z_p), obstruct (the family decision
// with its invariant profile), brauer (explicit quaternion
// decomposition at a base point), count (the census routes), constants
// (truncated Euler products and the L-value aggregates), verify
// (self-check suites).  Records stream as json-lines or tsv; exit code
// 0 on success, 2 on invalid input, 3 on internal inconsistency.

#include <iosfwd>

namespace qbm {

// Parses argv (argv[0] is the program name) and runs the request,
// writing records to `out` (or the file named by --out) and error
// messages to `err`.  Returns the process exit code.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qbm
