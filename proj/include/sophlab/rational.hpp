#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace sophlab {

// Exact arithmetic for Kraft sums and probability mass. Desk-scale budgets
// keep numerators and denominators far inside 64 bits.
using Rational = boost::rational<long long>;

inline Rational pow2_inverse(uint32_t bits) {
  return Rational(1, static_cast<long long>(1) << bits);
}

std::string to_string(const Rational& r);

// Parses "p/q" or a bare integer. Throws BadInputError.
Rational parse_rational(const std::string& text);

// Smallest L >= 0 with 2^L >= r; requires r >= 1. Used for code lengths.
uint32_t ceil_log2(const Rational& r);

// Largest L >= 0 with 2^L <= r; requires r >= 1. Used for integer radii.
uint32_t floor_log2(const Rational& r);

}  // namespace sophlab
