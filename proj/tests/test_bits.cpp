#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "sophlab/bits.hpp"
#include "sophlab/errors.hpp"
#include "sophlab/search.hpp"

using namespace sophlab;

TEST_CASE("nat/string correspondence starts (0,e),(1,0),(2,1),(3,00),(4,01)") {
  CHECK(bits::from_nat(0) == "");
  CHECK(bits::from_nat(1) == "0");
  CHECK(bits::from_nat(2) == "1");
  CHECK(bits::from_nat(3) == "00");
  CHECK(bits::from_nat(4) == "01");
  CHECK(bits::from_nat(5) == "10");
  CHECK(bits::from_nat(13) == "110");
  CHECK(bits::to_nat("") == 0);
  CHECK(bits::to_nat("0") == 1);
  CHECK(bits::to_nat("1") == 2);
  CHECK(bits::to_nat("00") == 3);
  CHECK(bits::to_nat("01") == 4);
}

TEST_CASE("nat/string round-trips for every string up to length 10") {
  uint64_t n = 0;
  for_each_data_string(0, 10, [&](const Bits& s) {
    CHECK(bits::from_nat(bits::to_nat(s)) == s);
    CHECK(bits::to_nat(s) == n);  // canonical order enumerates 0,1,2,...
    ++n;
    return true;
  });
  for (uint64_t v = 0; v < 3000; ++v) CHECK(bits::to_nat(bits::from_nat(v)) == v);
}

TEST_CASE("to_nat_clamped saturates just past the cap") {
  CHECK(bits::to_nat_clamped("110", 100) == 13);
  CHECK(bits::to_nat_clamped("110", 13) == 13);
  CHECK(bits::to_nat_clamped("110", 12) == 13);  // clamp value is cap+1
  Bits sixty_four(64, '1');
  CHECK(bits::to_nat_clamped(sixty_four, 1000) == 1001);
}

TEST_CASE("bar code is 1^n 0 x") {
  CHECK(bits::bar_code("") == "0");
  CHECK(bits::bar_code("0") == "100");
  CHECK(bits::bar_code("01") == "11001");
  CHECK(bits::bar_code("110") == "1110110");
  for_each_data_string(0, 8, [&](const Bits& s) {
    CHECK(bits::bar_code(s).size() == 2 * s.size() + 1);
    return true;
  });
}

TEST_CASE("std code prefixes the bar-coded length") {
  CHECK(bits::std_code("") == "0");
  CHECK(bits::std_code("01") == "10101");  // l=2 <-> "1", bar("1")="101"
  CHECK(bits::std_code("110") == "11000110");  // l=3 <-> "00", bar("00")="11000"
}

TEST_CASE("pair code concatenates std code and second component") {
  CHECK(bits::pair_code("01", "1") == "101011");
  CHECK(bits::pair_code("", "") == "0");
  CHECK(bits::pair_code("", "11") == "011");
}

TEST_CASE("std codes of distinct strings are prefix-free") {
  std::vector<Bits> codes;
  for_each_data_string(0, 6, [&](const Bits& s) {
    codes.push_back(bits::std_code(s));
    return true;
  });
  std::sort(codes.begin(), codes.end());
  for (std::size_t i = 0; i + 1 < codes.size(); ++i) {
    CHECK(codes[i] != codes[i + 1]);
    CHECK(codes[i + 1].compare(0, codes[i].size(), codes[i]) != 0);
  }
}

TEST_CASE("canonical order is length first, lexicographic within") {
  CHECK(bits::canonical_less("", "0"));
  CHECK(bits::canonical_less("1", "00"));
  CHECK(bits::canonical_less("00", "01"));
  CHECK(!bits::canonical_less("01", "01"));
  CHECK(!bits::canonical_less("00", "1"));
}

TEST_CASE("parse validates bit strings") {
  CHECK(bits::parse("0101") == "0101");
  CHECK(bits::parse("") == "");
  CHECK_THROWS_AS(bits::parse("01a"), BadInputError);
  CHECK_THROWS_AS(bits::parse("2"), BadInputError);
  CHECK(bits::valid("0101"));
  CHECK(!bits::valid("01 "));
}
