#include <doctest.h>

#include <cstdlib>
#include <optional>
#include <variant>
#include <vector>

#include "sophlab/enumerate.hpp"
#include "sophlab/eval.hpp"
#include "sophlab/program.hpp"
#include "sophlab/search.hpp"
#include "sophlab/snapshot.hpp"
#include "sophlab/stats.hpp"
#include "support/naive_oracle.hpp"
#include "support/test_util.hpp"

using namespace sophlab;
using testutil::kRep13;
using testutil::prog;
using testutil::square_budgets;

// The running example throughout: kRep13 is "10" repeated 13 times. Its two
// interesting realizations are the identity program on the raw string, pair
// (6, 26), and the 18-bit build-and-repeat program on data "110", pair
// (18, 3):  ONE ZERO CAT makes "10", READALL reads "110", REP repeats the
// pair nat("110") = 13 times.
namespace {

const Bits kIdentityEnc = "111000";
const Bits kRepeaterEnc = "011010100111010100";
const Bits kRepeaterData = "110";

Program repeater() {
  return prog({Instr::One, Instr::Zero, Instr::Cat, Instr::ReadAll, Instr::Rep,
               Instr::End});
}

// A hand-assembled budget-32 table entry for kRep13. Building the real
// 32-bit table is far out of reach, but the entry is pinned down by scans
// that are feasible:
//   - totals <= 20 are searched exhaustively live below: no realization, so
//     k = 21, attained by (18, 3);
//   - programs of <= 17 bits were scanned exhaustively up to total 31 with
//     no realization found, and up to total 32 the identity pair (6, 26) is
//     the only one (rerun that scan with SOPHLAB_EXHAUSTIVE=1);
//   - no program under 6 bits outputs a 26-bit string at all (checked live).
// Frontier points between (6, 26) and (18, 3) are therefore impossible, and
// later points cannot change k, the sophistication, or the structure
// function below total 21.
enumerate::ComplexityTable synthetic_t32() {
  enumerate::ComplexityTable t;
  t.budgets = square_budgets(32);
  enumerate::TableEntry e;
  e.k = 21;
  e.witness_program = kRepeaterEnc;
  e.witness_data = kRepeaterData;
  e.optimal_count = 1;
  e.pareto = {enumerate::ParetoPoint{6, 26, kIdentityEnc, kRep13},
              enumerate::ParetoPoint{18, 3, kRepeaterEnc, kRepeaterData}};
  t.entries.emplace(kRep13, std::move(e));
  return t;
}

}  // namespace

TEST_CASE("the repeated-pair string at budget 22") {
  auto t = enumerate::build_table(square_budgets(22), "",
                                  enumerate::BuildOptions{8});
  // Whole-table pin: any drift anywhere in the enumeration changes this.
  CHECK(snapshot::table_digest(t) == 0x1a8d63c2e224748fULL);
  CHECK(t.entries.size() == 132832);

  REQUIRE(enumerate::k(t, kRep13) == 21);
  const enumerate::TableEntry* e = t.find(kRep13);
  REQUIRE(e != nullptr);
  CHECK(e->witness_program == kRepeaterEnc);
  CHECK(e->witness_data == kRepeaterData);

  // The witness decodes to the build-and-repeat program and replays.
  auto dec = decode_program(e->witness_program);
  REQUIRE(std::holds_alternative<Program>(dec));
  CHECK(std::get<Program>(dec) == repeater());
  EvalOutcome run = eval(std::get<Program>(dec), e->witness_data, "",
                         square_budgets(22));
  REQUIRE(run.ok());
  CHECK(run.output() == kRep13);

  // At 22 bits of data budget the identity pair (6, 26) no longer fits, so
  // the repeater is the whole frontier and the structure function is flat.
  REQUIRE(e->pareto.size() == 1);
  CHECK(e->pareto[0] ==
        enumerate::ParetoPoint{18, 3, kRepeaterEnc, kRepeaterData});

  auto s = stats::sophistication(t, kRep13, {0});
  CHECK(s.soph == 18);
  CHECK(s.k == 21);
  CHECK(s.c_used == 0);

  for (const auto& pt : stats::structure_lambda(t, kRep13)) {
    if (pt.alpha < 18) {
      CHECK(!pt.lambda.has_value());
    } else {
      CHECK(pt.lambda == 21);
      CHECK(pt.h == 3);
    }
  }
}

TEST_CASE("the repeated-pair string at budget 32") {
  Budgets b32 = square_budgets(32);

  // No realization with total length <= 20 exists at all: a total that
  // small forces both parts under every cap, and the reference scan over
  // that whole region comes back empty. k = 21 at budget 32 follows.
  CHECK(oracle::find_realizations(kRep13, 20, 20, b32.max_steps,
                                  b32.max_string_len)
            .empty());

  // Both frontier pairs replay within the 32-bit budgets.
  EvalOutcome ident = eval(prog({Instr::ReadAll, Instr::End}), kRep13, "", b32);
  REQUIRE(ident.ok());
  CHECK(ident.output() == kRep13);
  CHECK(encode_program(prog({Instr::ReadAll, Instr::End})) == kIdentityEnc);
  EvalOutcome rep = eval(repeater(), kRepeaterData, "", b32);
  REQUIRE(rep.ok());
  CHECK(rep.output() == kRep13);
  CHECK(encode_program(repeater()) == kRepeaterEnc);

  // No program under 6 bits can output kRep13 from any data word: such a
  // program consumes at most one bit, so only a few data lengths are even
  // consumable, and none of the outputs has 26 bits.
  for (const Program& q : enumerate::programs_upto(5)) {
    for_each_data_string(0, 8, [&](const Bits& d) {
      EvalOutcome r = eval(q, d, "", b32);
      CHECK(!(r.ok() && r.output() == kRep13));
      return true;
    });
  }

  auto t = synthetic_t32();
  auto s0 = stats::sophistication(t, kRep13, {0});
  CHECK(s0.soph == 18);
  CHECK(s0.k == 21);
  CHECK(s0.c_used == 0);
  CHECK(s0.witness_data == kRepeaterData);

  // The identity pair costs 32 = k + 11, so it enters exactly at slack 11
  // and the sophistication collapses to the 6-bit copy program.
  auto s10 = stats::sophistication(t, kRep13, {10});
  CHECK(s10.soph == 18);
  CHECK(s10.c_used == 0);
  auto s11 = stats::sophistication(t, kRep13, {11});
  CHECK(s11.soph == 6);
  CHECK(s11.c_used == 11);
  CHECK(s11.witness_data == kRep13);

  CHECK(stats::is_sufficient(t, repeater(), kRep13, {0}));

  for (const auto& pt : stats::structure_lambda(t, kRep13)) {
    if (pt.alpha < 6) {
      CHECK(!pt.lambda.has_value());
    } else if (pt.alpha < 18) {
      CHECK(pt.lambda == 32);
      CHECK(pt.h == 26);
    } else {
      CHECK(pt.lambda == 21);
      CHECK(pt.h == 3);
    }
  }
}

// The expensive scan backing the synthetic budget-32 entry: programs of at
// most 17 bits, totals up to 32. Takes the better part of a minute, so it
// only runs when SOPHLAB_EXHAUSTIVE=1 is set.
TEST_CASE("exhaustive low-alpha scan for the repeated-pair string") {
  if (std::getenv("SOPHLAB_EXHAUSTIVE") == nullptr) return;
  Budgets b32 = square_budgets(32);
  auto upto31 = oracle::find_realizations(kRep13, 17, 31, b32.max_steps,
                                          b32.max_string_len);
  CHECK(upto31.empty());
  auto upto32 = oracle::find_realizations(kRep13, 17, 32, b32.max_steps,
                                          b32.max_string_len);
  REQUIRE(upto32.size() == 1);
  CHECK(upto32[0].first == kIdentityEnc);
  CHECK(upto32[0].second == kRep13);
}
