#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "sophlab/bits.hpp"
#include "sophlab/program.hpp"

namespace sophlab {

// Resource bounds. Enumeration respects the bit budgets; eval itself enforces
// only max_steps and max_string_len, so callers may probe pairs of any size.
struct Budgets {
  uint32_t max_pair_bits = 14;
  uint32_t max_program_bits = 14;
  uint32_t max_data_bits = 14;
  uint64_t max_steps = 4096;
  uint32_t max_string_len = 64;

  // Throws BadInputError on nonsense (zero fields, per-part bound above the
  // pair bound, pair bound too large for exact Kraft accounting).
  void validate() const;

  bool operator==(const Budgets&) const = default;
};

enum class AbortReason : uint8_t {
  DataExhausted,   // READ with no data left
  DataUnconsumed,  // END with data still unread
  StackUnderflow,  // CAT/REP/DUP without enough operands
  StepLimit,       // accumulated cost exceeded max_steps
  SizeLimit,       // an operand would exceed max_string_len
};

std::string_view to_string(AbortReason r);

class EvalOutcome {
 public:
  static EvalOutcome success(Bits output, uint64_t steps, uint32_t consumed) {
    EvalOutcome o;
    o.ok_ = true;
    o.output_ = std::move(output);
    o.steps_ = steps;
    o.data_consumed_ = consumed;
    return o;
  }
  static EvalOutcome failure(AbortReason reason) {
    EvalOutcome o;
    o.ok_ = false;
    o.reason_ = reason;
    return o;
  }

  bool ok() const { return ok_; }
  const Bits& output() const { return output_; }
  uint64_t steps() const { return steps_; }
  uint32_t data_consumed() const { return data_consumed_; }
  AbortReason reason() const { return reason_; }

 private:
  bool ok_ = false;
  Bits output_;
  uint64_t steps_ = 0;
  uint32_t data_consumed_ = 0;
  AbortReason reason_ = AbortReason::DataExhausted;
};

// Reusable stack storage for tight enumeration loops.
struct EvalScratch {
  std::vector<Bits> slots;
};

// Deterministic, total evaluation: there is no control flow in the machine,
// so every run halts after at most instrs().size() instructions.
// Cost: 1 per instruction, plus the length of the string built by
// CAT/REP/READALL/DUP/AUX. Success requires the data to be consumed exactly.
EvalOutcome eval(const Program& p, const Bits& data, const Bits& aux,
                 const Budgets& b);
EvalOutcome eval(const Program& p, const Bits& data, const Bits& aux,
                 const Budgets& b, EvalScratch& scratch);

}  // namespace sophlab
