#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "sophlab/eval.hpp"

namespace sophlab {

// Visits every data string of length min_len..max_len in canonical order
// (length ascending, lexicographic within a length). Stops early when the
// callback returns false.
void for_each_data_string(uint32_t min_len, uint32_t max_len,
                          const std::function<bool(const Bits&)>& fn);

// LENGTH of the shortest data word d with eval(p, d, aux) == x, searching
// l(d) <= max_len in canonical order; nullopt when there is none.
std::optional<uint32_t> min_preimage_len(const Program& p, const Bits& x,
                                         const Bits& aux, const Budgets& b,
                                         uint32_t max_len);

}  // namespace sophlab
