#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace sophlab {

// Version tag carried by every serialized artifact. Tables built by a machine
// with a different instruction set must never be mixed with this one.
inline constexpr std::string_view kIsaVersion = "PVM-1";

enum class Instr : uint8_t {
  End,
  Zero,
  One,
  Cat,
  Rep,
  Read,
  ReadAll,
  Dup,
  Aux,
};

inline constexpr std::size_t kInstrCount = 9;

struct InstrSpec {
  Instr op;
  std::string_view name;
  std::string_view code;    // complete prefix code; Kraft sum is exactly 1
  std::string_view effect;  // one-line semantics, for docs and dumps
};

// Machine-readable instruction table, ordered by code (lexicographic).
inline constexpr std::array<InstrSpec, kInstrCount> kIsa{{
    {Instr::End, "END", "00",
     "halt; output = top of stack (empty stack outputs the empty string); "
     "all data must be consumed"},
    {Instr::Zero, "ZERO", "010", "push \"0\""},
    {Instr::One, "ONE", "011", "push \"1\""},
    {Instr::Cat, "CAT", "100", "pop b, pop a, push a.b"},
    {Instr::Rep, "REP", "101", "pop n, pop a, push a repeated nat(n) times"},
    {Instr::Read, "READ", "110", "consume one data bit and push it"},
    {Instr::ReadAll, "READALL", "1110",
     "consume all remaining data bits and push them (possibly empty)"},
    {Instr::Dup, "DUP", "11110", "push a copy of the top of stack"},
    {Instr::Aux, "AUX", "11111", "push the auxiliary string"},
}};

constexpr const InstrSpec& instr_spec(Instr op) {
  return kIsa[static_cast<std::size_t>(op)];
}

constexpr uint32_t instr_bits(Instr op) {
  return static_cast<uint32_t>(instr_spec(op).code.size());
}

}  // namespace sophlab
