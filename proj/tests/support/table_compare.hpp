#pragma once

#include <string>

#include "sophlab/enumerate.hpp"
#include "support/naive_oracle.hpp"

namespace oracle {

// Full structural comparison of an oracle table against a built table:
// kraft mass, key set, k, canonical witnesses, optimal counts, and the
// Pareto frontier with its per-point witnesses. Returns an empty string on
// equality, otherwise a description of the first difference.
std::string diff_tables(const Table& expect,
                        const sophlab::enumerate::ComplexityTable& got);

}  // namespace oracle
