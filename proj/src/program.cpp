#include "sophlab/program.hpp"

#include "sophlab/errors.hpp"

namespace sophlab {

namespace {

// The instruction table is ordered by code; enum values index it directly.
static_assert(instr_spec(Instr::End).code == "00");
static_assert(instr_spec(Instr::Aux).code == "11111");

uint32_t total_bits(const std::vector<Instr>& instrs) {
  uint32_t n = 0;
  for (Instr op : instrs) n += instr_bits(op);
  return n;
}

}  // namespace

Program Program::from_instrs(std::vector<Instr> instrs) {
  if (instrs.empty() || instrs.back() != Instr::End) {
    throw BadInputError("program must end with END");
  }
  for (std::size_t i = 0; i + 1 < instrs.size(); ++i) {
    if (instrs[i] == Instr::End) {
      throw BadInputError("END may only appear as the last instruction");
    }
  }
  uint32_t bits = total_bits(instrs);
  return Program(std::move(instrs), bits);
}

DecodeResult decode_program(const Bits& encoded) {
  std::vector<Instr> instrs;
  std::size_t pos = 0;
  while (true) {
    bool matched = false;
    for (const InstrSpec& spec : kIsa) {
      if (encoded.compare(pos, spec.code.size(), spec.code) == 0) {
        pos += spec.code.size();
        instrs.push_back(spec.op);
        matched = true;
        break;
      }
    }
    if (!matched) {
      // The code is a complete prefix code, so the only way to fail is to
      // run out of bits mid-instruction.
      return DecodeError{DecodeErrorKind::Incomplete, pos};
    }
    if (instrs.back() == Instr::End) break;
  }
  if (pos != encoded.size()) {
    return DecodeError{DecodeErrorKind::TrailingBits, pos};
  }
  return Program::from_instrs(std::move(instrs));
}

Bits encode_program(const Program& p) {
  Bits out;
  out.reserve(p.bit_len());
  for (Instr op : p.instrs()) out += instr_spec(op).code;
  return out;
}

}  // namespace sophlab
