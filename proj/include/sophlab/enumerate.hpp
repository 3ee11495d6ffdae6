#pragma once

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sophlab/eval.hpp"
#include "sophlab/program.hpp"
#include "sophlab/rational.hpp"

namespace sophlab::enumerate {

// One point of the Pareto frontier of realizations of a string: no other
// successful pair has both coordinates <= this one. Each point carries its
// canonical witness (first pair in program order, then data order).
struct ParetoPoint {
  uint32_t program_bits = 0;
  uint32_t data_bits = 0;
  Bits program;  // encoded program bits
  Bits data;

  bool operator==(const ParetoPoint&) const = default;
};

struct TableEntry {
  uint32_t k = 0;             // minimal l(q) + l(d)
  Bits witness_program;       // canonical optimal pair
  Bits witness_data;
  uint64_t optimal_count = 0;  // number of pairs attaining k
  std::vector<ParetoPoint> pareto;  // program_bits strictly increasing,
                                    // data_bits strictly decreasing

  bool operator==(const TableEntry&) const = default;
};

struct ComplexityTable {
  Budgets budgets;
  Bits aux;
  Rational kraft{0};  // sum of 2^-(l(q)+l(d)) over all successful pairs
  std::unordered_map<Bits, TableEntry> entries;

  const TableEntry* find(const Bits& x) const;
  // Keys in canonical order; the serialization order.
  std::vector<const Bits*> sorted_keys() const;

  bool operator==(const ComplexityTable& other) const;
};

// All valid programs with bit_len <= max_bits in canonical program order:
// encoding length ascending, encoding lexicographic within a length.
// This order defines every program-side tie-break in the project.
std::vector<Program> programs_upto(uint32_t max_bits);

struct BuildOptions {
  unsigned workers = 1;
  // Refuse to start if the pruned enumeration would evaluate more pairs.
  uint64_t pair_cap = uint64_t{1} << 33;
};

// Exhaustive bounded enumeration of all (program, data) pairs within the
// budgets. The result is a pure function of (budgets, aux): worker count and
// scheduling never change it. Throws ResourceExceededError past pair_cap.
ComplexityTable build_table(const Budgets& b, const Bits& aux = {},
                            const BuildOptions& opts = {});

std::optional<uint32_t> k(const ComplexityTable& t, const Bits& x);

// Exact Kraft mass of the successful pairs within the budgets.
Rational kraft_sum(const Budgets& b, const Bits& aux = {});

// Conditional tables keyed by aux string, built on demand and kept under an
// LRU cap. k_cond(x, emptystring) consults the same construction as the
// unconditional table.
class TableCache {
 public:
  explicit TableCache(Budgets b, BuildOptions opts = {},
                      std::size_t capacity = 64);

  std::shared_ptr<const ComplexityTable> table_for(const Bits& aux);
  std::optional<uint32_t> k_cond(const Bits& x, const Bits& aux);

  const Budgets& budgets() const { return budgets_; }

 private:
  Budgets budgets_;
  BuildOptions opts_;
  std::size_t capacity_;
  std::mutex mu_;
  // Most recently used at the front.
  std::list<std::pair<Bits, std::shared_ptr<const ComplexityTable>>> lru_;
};

}  // namespace sophlab::enumerate
