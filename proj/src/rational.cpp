#include "sophlab/rational.hpp"

#include "sophlab/errors.hpp"

namespace sophlab {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& text) {
  try {
    std::size_t slash = text.find('/');
    if (slash == std::string::npos) {
      std::size_t used = 0;
      long long v = std::stoll(text, &used);
      if (used != text.size()) throw BadInputError("bad rational: " + text);
      return Rational(v);
    }
    std::size_t used_n = 0, used_d = 0;
    long long num = std::stoll(text.substr(0, slash), &used_n);
    std::string den_text = text.substr(slash + 1);
    long long den = std::stoll(den_text, &used_d);
    if (used_n != slash || used_d != den_text.size() || den == 0) {
      throw BadInputError("bad rational: " + text);
    }
    return Rational(num, den);
  } catch (const BadInputError&) {
    throw;
  } catch (const std::exception&) {
    throw BadInputError("bad rational: " + text);
  }
}

uint32_t ceil_log2(const Rational& r) {
  if (r < Rational(1)) throw BadInputError("ceil_log2 requires r >= 1");
  auto num = static_cast<unsigned __int128>(r.numerator());
  auto den = static_cast<unsigned __int128>(r.denominator());
  for (uint32_t level = 0; level <= 63; ++level) {
    if ((den << level) >= num) return level;
  }
  throw std::overflow_error("ceil_log2 out of range");
}

uint32_t floor_log2(const Rational& r) {
  if (r < Rational(1)) throw BadInputError("floor_log2 requires r >= 1");
  auto num = static_cast<unsigned __int128>(r.numerator());
  auto den = static_cast<unsigned __int128>(r.denominator());
  uint32_t level = 0;
  while (level < 63 && (den << (level + 1)) <= num) ++level;
  return level;
}

}  // namespace sophlab
