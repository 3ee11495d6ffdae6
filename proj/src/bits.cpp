#include "sophlab/bits.hpp"

#include <algorithm>
#include <stdexcept>

#include "sophlab/errors.hpp"

namespace sophlab::bits {

bool valid(std::string_view s) {
  for (char c : s) {
    if (c != '0' && c != '1') return false;
  }
  return true;
}

Bits parse(std::string_view text) {
  if (!valid(text)) {
    throw BadInputError("not a bit string: \"" + std::string(text) + "\"");
  }
  return Bits(text);
}

bool canonical_less(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

uint64_t to_nat(const Bits& s) {
  if (s.size() > 63) {
    throw std::overflow_error("to_nat: string longer than 63 bits");
  }
  uint64_t v = 1;
  for (char c : s) v = (v << 1) | static_cast<uint64_t>(c - '0');
  return v - 1;
}

uint64_t to_nat_clamped(const Bits& s, uint64_t cap) {
  uint64_t v = 1;
  for (char c : s) {
    if (v > cap) return cap + 1;
    v = (v << 1) | static_cast<uint64_t>(c - '0');
  }
  return v - 1 > cap ? cap + 1 : v - 1;
}

Bits from_nat(uint64_t n) {
  if (n == UINT64_MAX) {
    throw std::overflow_error("from_nat: value out of range");
  }
  uint64_t v = n + 1;
  Bits out;
  while (v > 1) {
    out.push_back(static_cast<char>('0' + (v & 1)));
    v >>= 1;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Bits bar_code(const Bits& x) {
  Bits out(x.size(), '1');
  out.push_back('0');
  out += x;
  return out;
}

Bits std_code(const Bits& x) {
  return bar_code(from_nat(x.size())) + x;
}

Bits pair_code(const Bits& x, const Bits& y) {
  return std_code(x) + y;
}

}  // namespace sophlab::bits
