#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "sophlab/enumerate.hpp"
#include "sophlab/errors.hpp"
#include "sophlab/eval.hpp"
#include "sophlab/program.hpp"
#include "sophlab/rational.hpp"
#include "sophlab/search.hpp"
#include "support/naive_oracle.hpp"
#include "support/table_compare.hpp"
#include "support/test_util.hpp"

using namespace sophlab;
using enumerate::build_table;
using testutil::prog;
using testutil::square_budgets;

TEST_CASE("programs_upto enumerates in canonical order") {
  auto two = enumerate::programs_upto(2);
  REQUIRE(two.size() == 1);
  CHECK(two[0].instrs() == std::vector<Instr>{Instr::End});

  auto five = enumerate::programs_upto(5);
  REQUIRE(five.size() == 6);
  CHECK(encode_program(five[0]) == "00");
  CHECK(five[1].instrs() == std::vector<Instr>{Instr::Zero, Instr::End});
  CHECK(five[2].instrs() == std::vector<Instr>{Instr::One, Instr::End});
  CHECK(five[3].instrs() == std::vector<Instr>{Instr::Cat, Instr::End});
  CHECK(five[4].instrs() == std::vector<Instr>{Instr::Rep, Instr::End});
  CHECK(five[5].instrs() == std::vector<Instr>{Instr::Read, Instr::End});

  // Count cross-check: decode every string of each length.
  for (uint32_t cap : {5u, 8u, 11u}) {
    std::size_t by_decode = 0;
    for_each_data_string(2, cap, [&](const Bits& s) {
      if (std::holds_alternative<Program>(decode_program(s))) ++by_decode;
      return true;
    });
    CHECK(enumerate::programs_upto(cap).size() == by_decode);
  }

  // Order: bit length ascending, encoding lexicographic within a length.
  auto all = enumerate::programs_upto(11);
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    Bits a = encode_program(all[i]);
    Bits b = encode_program(all[i + 1]);
    CHECK((a.size() < b.size() || (a.size() == b.size() && a < b)));
  }
}

TEST_CASE("small-budget table headline entries") {
  auto t = build_table(square_budgets(8));
  REQUIRE(t.entries.size() == 7);

  const auto* e = t.find("");
  REQUIRE(e != nullptr);
  CHECK(e->k == 2);
  CHECK(e->witness_program == "00");
  CHECK(e->witness_data == "");
  CHECK(e->optimal_count == 1);

  const auto* one = t.find("1");
  REQUIRE(one != nullptr);
  CHECK(one->k == 5);
  CHECK(one->witness_program == "01100");  // [ONE END], data-free
  CHECK(one->witness_data == "");

  const auto* zero = t.find("0");
  REQUIRE(zero != nullptr);
  CHECK(zero->k == 5);

  CHECK(enumerate::k(t, "00") == 8);
  CHECK(enumerate::k(t, "000") == std::nullopt);  // needs 9+ bits
}

TEST_CASE("oracle equivalence at pair budgets 8, 10, 12") {
  for (uint32_t bits : {8u, 10u, 12u}) {
    auto got = build_table(square_budgets(bits));
    auto expect = oracle::build(square_budgets(bits), "");
    CHECK(oracle::diff_tables(expect, got) == "");
  }
}

TEST_CASE("oracle equivalence for a conditional table") {
  auto got = build_table(square_budgets(10), "01");
  auto expect = oracle::build(square_budgets(10), "01");
  CHECK(oracle::diff_tables(expect, got) == "");
  CHECK(got.aux == "01");
}

TEST_CASE("kraft mass matches the exhaustive values and grows with budget") {
  // budget 2: only ([END], empty) halts.
  CHECK(build_table(square_budgets(2)).kraft == Rational(1, 4));
  // budget 5 adds [ZERO,END] and [ONE,END] with empty data; [READ,END] plus
  // a data bit totals 6 and stays out.
  CHECK(build_table(square_budgets(5)).kraft ==
        Rational(1, 4) + Rational(2, 32));

  const std::vector<std::pair<uint32_t, Rational>> frozen = {
      {8, Rational(53, 128)},
      {10, Rational(501, 1024)},
      {12, Rational(1169, 2048)},
      {14, Rational(10789, 16384)},
      {16, Rational(6171, 8192)},
  };
  Rational prev{0};
  for (const auto& [bits, expect] : frozen) {
    Rational got = build_table(square_budgets(bits)).kraft;
    CHECK(got == expect);
    CHECK(got <= Rational(1));
    CHECK(prev <= got);
    prev = got;
  }
  CHECK(enumerate::kraft_sum(square_budgets(14)) == Rational(10789, 16384));
}

TEST_CASE("kraft mass exceeds 1 once nested READALL pairs accumulate") {
  // The pair code q.d is not globally prefix-free: a program whose data needs
  // are swallowed by READALL accepts both a word and its extensions (see the
  // dedicated counterexample test), so the Kraft bound eventually breaks.
  auto t = build_table(square_budgets(22), {}, {.workers = 8});
  CHECK(t.kraft == Rational(1118349, 1048576));
  CHECK(t.kraft > Rational(1));
  CHECK(t.entries.size() == 132832);
}

TEST_CASE("successful pairs are not prefix-free: the READALL counterexample") {
  auto q = prog({Instr::ReadAll, Instr::ReadAll, Instr::Rep, Instr::End});
  REQUIRE(q.bit_len() == 13);
  Budgets b = square_budgets(14);
  auto on_empty = eval(q, "", "", b);
  auto on_zero = eval(q, "0", "", b);
  REQUIRE(on_empty.ok());
  REQUIRE(on_zero.ok());
  CHECK(on_empty.output() == "");
  CHECK(on_zero.output() == "");
  // q."" (13 bits) is a proper prefix of q."0" (14 bits); both succeed.
}

TEST_CASE("pairs over READALL-free programs are prefix-free") {
  // Programs without READALL consume a fixed number of bits, so each accepts
  // exactly one data length; with program codes prefix-free, so are pairs.
  Budgets b = square_budgets(12);
  std::vector<Bits> pairs;
  for (const auto& q : enumerate::programs_upto(12)) {
    bool has_readall = false;
    for (Instr op : q.instrs())
      if (op == Instr::ReadAll) has_readall = true;
    if (has_readall) continue;
    uint32_t room = 12 - q.bit_len();
    Bits enc = encode_program(q);
    for_each_data_string(0, room, [&](const Bits& d) {
      if (eval(q, d, "", b).ok()) pairs.push_back(enc + d);
      return true;
    });
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i)
    CHECK(pairs[i + 1].compare(0, pairs[i].size(), pairs[i]) != 0);
}

TEST_CASE("larger budgets keep every entry and never raise k") {
  auto small = build_table(square_budgets(8));
  auto large = build_table(square_budgets(12));
  CHECK(small.entries.size() < large.entries.size());
  for (const auto& [x, e] : small.entries) {
    const auto* big = large.find(x);
    REQUIRE(big != nullptr);
    CHECK(big->k <= e.k);
  }
}

TEST_CASE("k is bounded by the identity witness") {
  auto t = build_table(square_budgets(14));
  for (const Bits* x : t.sorted_keys())
    if (6 + x->size() <= 14) CHECK(t.find(*x)->k <= 6 + x->size());
}

TEST_CASE("worker count never changes the table") {
  auto one = build_table(square_budgets(12), {}, {.workers = 1});
  auto two = build_table(square_budgets(12), {}, {.workers = 2});
  auto eight = build_table(square_budgets(12), {}, {.workers = 8});
  CHECK(one == two);
  CHECK(one == eight);
}

TEST_CASE("the pair cap refuses oversized enumerations") {
  CHECK_THROWS_AS(
      build_table(square_budgets(12), {}, {.workers = 1, .pair_cap = 10}),
      ResourceExceededError);
}

TEST_CASE("budget validation") {
  Budgets b = square_budgets(10);
  b.max_program_bits = 11;  // exceeds the pair bound
  CHECK_THROWS_AS(b.validate(), BadInputError);
  Budgets huge = square_budgets(10);
  huge.max_pair_bits = 63;  // breaks exact Kraft accounting
  CHECK_THROWS_AS(huge.validate(), BadInputError);
  Budgets zero = square_budgets(10);
  zero.max_steps = 0;
  CHECK_THROWS_AS(zero.validate(), BadInputError);
}

TEST_CASE("table cache serves conditional complexities") {
  enumerate::TableCache cache(square_budgets(10), {}, 2);
  auto base = cache.table_for("");
  CHECK(base->aux == "");
  CHECK(cache.k_cond("", "") == 2);
  CHECK(cache.k_cond("0", "") == 5);

  // [AUX,END] with empty data gives every aux string to itself at 7 bits.
  for (const Bits& aux : {Bits("0110"), Bits("10101")})
    CHECK(cache.k_cond(aux, aux).value() <= 7);

  // Conditional dominance: an unconditional witness stays valid under aux.
  auto cond = cache.table_for("1");
  for (const auto& [x, e] : base->entries) {
    const auto* ce = cond->find(x);
    REQUIRE(ce != nullptr);
    CHECK(ce->k <= e.k);
  }

  // Rotate past the LRU capacity and return; values must be rebuilt intact.
  cache.table_for("00");
  cache.table_for("01");
  cache.table_for("10");
  CHECK(cache.k_cond("", "") == 2);
}
