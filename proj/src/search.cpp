#include "sophlab/search.hpp"

namespace sophlab {

namespace {

// Binary odometer: "0...0" -> ... -> "1...1"; returns false on wraparound.
bool next_lex(Bits& s) {
  for (std::size_t i = s.size(); i-- > 0;) {
    if (s[i] == '0') {
      s[i] = '1';
      return true;
    }
    s[i] = '0';
  }
  return false;
}

}  // namespace

void for_each_data_string(uint32_t min_len, uint32_t max_len,
                          const std::function<bool(const Bits&)>& fn) {
  for (uint32_t n = min_len; n <= max_len; ++n) {
    Bits d(n, '0');
    do {
      if (!fn(d)) return;
    } while (next_lex(d));
    if (n == UINT32_MAX) break;
  }
}

std::optional<uint32_t> min_preimage_len(const Program& p, const Bits& x,
                                         const Bits& aux, const Budgets& b,
                                         uint32_t max_len) {
  std::optional<uint32_t> found;
  EvalScratch scratch;
  for_each_data_string(0, max_len, [&](const Bits& d) {
    EvalOutcome out = eval(p, d, aux, b, scratch);
    if (out.ok() && out.output() == x) {
      found = static_cast<uint32_t>(d.size());
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace sophlab
