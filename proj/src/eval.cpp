#include "sophlab/eval.hpp"

#include "sophlab/errors.hpp"

namespace sophlab {

void Budgets::validate() const {
  if (max_pair_bits < 2) {
    throw BadInputError("max_pair_bits must be at least 2 (the END program)");
  }
  if (max_pair_bits > 62) {
    throw BadInputError("max_pair_bits above 62 breaks exact Kraft sums");
  }
  if (max_program_bits < 2 || max_program_bits > max_pair_bits) {
    throw BadInputError("max_program_bits must lie in [2, max_pair_bits]");
  }
  if (max_data_bits > max_pair_bits) {
    throw BadInputError("max_data_bits must not exceed max_pair_bits");
  }
  if (max_steps == 0) throw BadInputError("max_steps must be positive");
  if (max_string_len == 0) {
    throw BadInputError("max_string_len must be positive");
  }
}

std::string_view to_string(AbortReason r) {
  switch (r) {
    case AbortReason::DataExhausted: return "DataExhausted";
    case AbortReason::DataUnconsumed: return "DataUnconsumed";
    case AbortReason::StackUnderflow: return "StackUnderflow";
    case AbortReason::StepLimit: return "StepLimit";
    case AbortReason::SizeLimit: return "SizeLimit";
  }
  return "?";
}

namespace {

// Stack helpers over reusable slots: `top` counts live entries; dead slots
// keep their capacity for the next eval.
inline Bits& push_slot(EvalScratch& s, std::size_t& top) {
  if (top == s.slots.size()) s.slots.emplace_back();
  return s.slots[top++];
}

}  // namespace

EvalOutcome eval(const Program& p, const Bits& data, const Bits& aux,
                 const Budgets& b) {
  EvalScratch scratch;
  return eval(p, data, aux, b, scratch);
}

EvalOutcome eval(const Program& p, const Bits& data, const Bits& aux,
                 const Budgets& b, EvalScratch& scratch) {
  const uint64_t max_len = b.max_string_len;
  std::size_t top = 0;
  std::size_t pos = 0;  // data cursor
  uint64_t cost = 0;

  for (Instr op : p.instrs()) {
    cost += 1;
    switch (op) {
      case Instr::Zero:
      case Instr::One: {
        push_slot(scratch, top).assign(1, op == Instr::Zero ? '0' : '1');
        break;
      }
      case Instr::Cat: {
        if (top < 2) return EvalOutcome::failure(AbortReason::StackUnderflow);
        Bits& a = scratch.slots[top - 2];
        Bits& bstr = scratch.slots[top - 1];
        uint64_t rl = a.size() + bstr.size();
        if (rl > max_len) return EvalOutcome::failure(AbortReason::SizeLimit);
        cost += rl;
        if (cost > b.max_steps) {
          return EvalOutcome::failure(AbortReason::StepLimit);
        }
        a += bstr;
        --top;
        break;
      }
      case Instr::Rep: {
        if (top < 2) return EvalOutcome::failure(AbortReason::StackUnderflow);
        uint64_t count = bits::to_nat_clamped(scratch.slots[top - 1], max_len);
        --top;  // n is consumed either way
        Bits& a = scratch.slots[top - 1];
        if (a.empty()) {
          // The empty string repeated any number of times is empty, at no
          // size cost; count may exceed every budget here.
          a.clear();
          break;
        }
        uint64_t rl = static_cast<uint64_t>(a.size()) * count;
        if (count > max_len || rl > max_len) {
          return EvalOutcome::failure(AbortReason::SizeLimit);
        }
        cost += rl;
        if (cost > b.max_steps) {
          return EvalOutcome::failure(AbortReason::StepLimit);
        }
        if (count == 0) {
          a.clear();
        } else {
          const Bits unit = a;
          a.reserve(rl);
          for (uint64_t i = 1; i < count; ++i) a += unit;
        }
        break;
      }
      case Instr::Read: {
        if (pos >= data.size()) {
          return EvalOutcome::failure(AbortReason::DataExhausted);
        }
        push_slot(scratch, top).assign(1, data[pos]);
        ++pos;
        break;
      }
      case Instr::ReadAll: {
        uint64_t rl = data.size() - pos;
        if (rl > max_len) return EvalOutcome::failure(AbortReason::SizeLimit);
        cost += rl;
        if (cost > b.max_steps) {
          return EvalOutcome::failure(AbortReason::StepLimit);
        }
        push_slot(scratch, top).assign(data, pos, Bits::npos);
        pos = data.size();
        break;
      }
      case Instr::Dup: {
        if (top < 1) return EvalOutcome::failure(AbortReason::StackUnderflow);
        // The duplicated string is already within max_string_len.
        cost += scratch.slots[top - 1].size();
        if (cost > b.max_steps) {
          return EvalOutcome::failure(AbortReason::StepLimit);
        }
        // Copy before push_slot: growing the slot vector would invalidate a
        // reference into it.
        Bits copy = scratch.slots[top - 1];
        push_slot(scratch, top) = std::move(copy);
        break;
      }
      case Instr::Aux: {
        if (aux.size() > max_len) {
          return EvalOutcome::failure(AbortReason::SizeLimit);
        }
        cost += aux.size();
        if (cost > b.max_steps) {
          return EvalOutcome::failure(AbortReason::StepLimit);
        }
        push_slot(scratch, top) = aux;
        break;
      }
      case Instr::End: {
        if (cost > b.max_steps) {
          return EvalOutcome::failure(AbortReason::StepLimit);
        }
        if (pos != data.size()) {
          return EvalOutcome::failure(AbortReason::DataUnconsumed);
        }
        Bits out = top > 0 ? scratch.slots[top - 1] : Bits();
        return EvalOutcome::success(std::move(out),
                                    cost,
                                    static_cast<uint32_t>(pos));
      }
    }
    if (cost > b.max_steps) {
      return EvalOutcome::failure(AbortReason::StepLimit);
    }
  }
  // Unreachable: Program guarantees a trailing END.
  return EvalOutcome::failure(AbortReason::StepLimit);
}

}  // namespace sophlab
