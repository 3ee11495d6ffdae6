#pragma once

#include <ostream>

namespace sophlab::cli {

// Runs the invariant audit at fixed small budgets and reports one line per
// check. Returns 0 when every check passes, 1 otherwise; the first failing
// check is named on the final line. flip_isa corrupts the audited copy of
// the instruction table (never the live one) so the audit itself can be
// exercised end to end.
int run_selftest(std::ostream& out, bool flip_isa);

}  // namespace sophlab::cli
