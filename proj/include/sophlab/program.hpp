#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "sophlab/bits.hpp"
#include "sophlab/isa.hpp"

namespace sophlab {

// A decoded program: a nonempty instruction sequence whose single END is the
// last instruction. bit_len() is the length of the self-delimiting encoding.
class Program {
 public:
  // Throws BadInputError unless END appears exactly once, at the end.
  static Program from_instrs(std::vector<Instr> instrs);

  const std::vector<Instr>& instrs() const { return instrs_; }
  uint32_t bit_len() const { return bit_len_; }

  bool operator==(const Program& other) const {
    return instrs_ == other.instrs_;
  }

 private:
  Program(std::vector<Instr> instrs, uint32_t bit_len)
      : instrs_(std::move(instrs)), bit_len_(bit_len) {}

  std::vector<Instr> instrs_;
  uint32_t bit_len_ = 0;
};

enum class DecodeErrorKind : uint8_t {
  Incomplete,    // bits ran out mid-instruction or before any END
  TrailingBits,  // bits continue past the END instruction
};

struct DecodeError {
  DecodeErrorKind kind;
  std::size_t bit_pos;  // position where decoding stopped
};

using DecodeResult = std::variant<Program, DecodeError>;

// Programs are self-delimiting: decode of a valid encoding consumes exactly
// the encoding. No two valid encodings are prefixes of one another.
DecodeResult decode_program(const Bits& encoded);

Bits encode_program(const Program& p);

}  // namespace sophlab
