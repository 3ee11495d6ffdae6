#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sophlab {

// Bit strings are std::strings over the characters '0' and '1'. The empty
// string is the empty word. All parsing boundaries validate, so internal code
// may assume well-formed content.
using Bits = std::string;

namespace bits {

bool valid(std::string_view s);

// Validating conversion from user-supplied text. Throws BadInputError.
Bits parse(std::string_view text);

// Canonical string order used for every tie-break in the project:
// shorter strings first, lexicographic within a length.
bool canonical_less(const Bits& a, const Bits& b);

// The standard correspondence between natural numbers and bit strings:
// (0, ""), (1, "0"), (2, "1"), (3, "00"), (4, "01"), (5, "10"), ...
// to_nat(s) is the value of "1"+s as binary, minus one.
uint64_t to_nat(const Bits& s);  // requires l(s) <= 63
Bits from_nat(uint64_t n);

// As to_nat but clamps to cap+1 as soon as the value exceeds cap, so callers
// can test "count > cap" without overflow.
uint64_t to_nat_clamped(const Bits& s, uint64_t cap);

// Self-delimiting codes. bar_code(x) = 1^l(x) 0 x has length 2*l(x)+1.
// std_code(x) = bar_code(from_nat(l(x))) x. pair_code(x, y) = std_code(x) y.
Bits bar_code(const Bits& x);
Bits std_code(const Bits& x);
Bits pair_code(const Bits& x, const Bits& y);

}  // namespace bits
}  // namespace sophlab
