#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sophlab/enumerate.hpp"
#include "sophlab/program.hpp"

namespace sophlab::stats {

// Slack budget for sufficiency tests: a pair counts as sufficient when its
// total length is within c bits of the optimum.
struct SufficiencyParams {
  uint32_t c = 0;
};

struct SophResult {
  uint32_t soph;  // == witness_program.bit_len()
  Program witness_program;
  Bits witness_data;
  uint32_t k;       // optimum for the queried string
  uint32_t c_used;  // actual slack of the witness: total - k (<= params.c)
};

// One sample of the structure function. lambda is the least total pair
// length among realizations whose program part fits in alpha bits; h is the
// data length of that realization. Both empty below the least feasible alpha.
struct StructurePoint {
  uint32_t alpha = 0;
  std::optional<uint32_t> lambda;
  std::optional<uint32_t> h;
};

enum class MutualMode : uint8_t {
  AuxIsString,       // condition on x itself
  AuxIsWitnessPair,  // condition on x's canonical witness pair, encoded q.d
};

struct MaxSophResult {
  Bits x;  // lexicographically least argmax
  SophResult result;
  uint64_t skipped;  // length-n strings with no table entry
};

// The minimal (program length, data length) antichain for x, each point with
// its canonical witness. Throws UnknownStringError when x has no entry.
const std::vector<enumerate::ParetoPoint>& pareto_pairs(
    const enumerate::ComplexityTable& t, const Bits& x);

// True when q produces x from some data word within the table's budgets and
// the best such pair is within p.c bits of optimal.
bool is_sufficient(const enumerate::ComplexityTable& t, const Program& q,
                   const Bits& x, const SufficiencyParams& p);

// Least program length among realizations whose total is within p.c of k.
SophResult sophistication(const enumerate::ComplexityTable& t, const Bits& x,
                          const SufficiencyParams& p);

// Structure function samples for alpha = 0 .. budgets.max_program_bits.
std::vector<StructurePoint> structure_lambda(const enumerate::ComplexityTable& t,
                                             const Bits& x);

// Number of pairs attaining k(t, x) exactly.
uint64_t count_optimal_pairs(const enumerate::ComplexityTable& t,
                             const Bits& x);

// Largest optimal-pair count over the whole table, with a witness string.
std::pair<Bits, uint64_t> max_optimal_count(const enumerate::ComplexityTable& t);

// k(y) - k(y | aux), where aux is x or x's canonical witness pair. Signed:
// desk-scale budgets make no nonnegativity promise, though the conditional
// machinery here never loses to the unconditional table.
int64_t mutual_info(enumerate::TableCache& cache, const Bits& x, const Bits& y,
                    MutualMode mode = MutualMode::AuxIsString);

// Max sophistication over the length-n strings present in the table,
// deterministic for any worker count. Throws NoCoverageError when the table
// has no length-n entry.
MaxSophResult max_soph_of_length(const enumerate::ComplexityTable& t,
                                 uint32_t n, const SufficiencyParams& p,
                                 unsigned workers = 1);

}  // namespace sophlab::stats
