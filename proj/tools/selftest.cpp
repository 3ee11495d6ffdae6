#include "selftest.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sophlab/bits.hpp"
#include "sophlab/enumerate.hpp"
#include "sophlab/eval.hpp"
#include "sophlab/isa.hpp"
#include "sophlab/program.hpp"
#include "sophlab/rational.hpp"
#include "sophlab/search.hpp"
#include "sophlab/snapshot.hpp"
#include "sophlab/stats.hpp"

namespace sophlab::cli {
namespace {

// The audit inspects a copy of the instruction table so a fault-injection
// run can corrupt it without touching the live machine.
std::vector<std::string> audit_codes(bool flip) {
  std::vector<std::string> codes;
  for (const auto& spec : kIsa) codes.emplace_back(spec.code);
  if (flip) codes[static_cast<int>(Instr::Read)] = "11";  // prefix of READALL
  return codes;
}

bool is_prefix(const std::string& a, const std::string& b) {
  return a.size() <= b.size() && b.compare(0, a.size(), a) == 0;
}

struct Reporter {
  std::ostream& out;
  std::string first_failure;

  bool note(const std::string& name, bool ok) {
    out << "check " << name << " " << (ok ? "ok" : "FAIL") << "\n";
    if (!ok && first_failure.empty()) first_failure = name;
    return ok;
  }
};

bool check_isa_prefix_free(Reporter& r, const std::vector<std::string>& codes) {
  bool ok = true;
  for (std::size_t i = 0; i < codes.size(); ++i)
    for (std::size_t j = 0; j < codes.size(); ++j)
      if (i != j && is_prefix(codes[i], codes[j])) ok = false;
  return r.note("isa-prefix-free", ok);
}

bool check_isa_kraft(Reporter& r, const std::vector<std::string>& codes) {
  Rational sum{0};
  for (const auto& c : codes) sum += pow2_inverse(static_cast<uint32_t>(c.size()));
  r.out << "info isa-kraft sum=" << to_string(sum) << "\n";
  return r.note("isa-kraft", sum == Rational(1));
}

// Inverse of bits::bar_code, reading from pos; nullopt on malformed input.
std::optional<Bits> read_bar(const Bits& s, std::size_t& pos) {
  std::size_t ones = 0;
  while (pos + ones < s.size() && s[pos + ones] == '1') ++ones;
  if (pos + ones >= s.size()) return std::nullopt;  // missing the 0 marker
  std::size_t body = pos + ones + 1;
  if (body + ones > s.size()) return std::nullopt;
  Bits x = s.substr(body, ones);
  pos = body + ones;
  return x;
}

bool check_codec_roundtrip(Reporter& r) {
  bool ok = true;
  for (uint64_t n = 0; n <= 300; ++n)
    if (bits::to_nat(bits::from_nat(n)) != n) ok = false;

  // bar and std codes must decode back to their payload and consume exactly
  // their own length; pair_code must split at the std boundary.
  std::vector<Bits> samples;
  for_each_data_string(0, 7, [&](const Bits& s) {
    samples.push_back(s);
    return true;
  });
  for (const Bits& x : samples) {
    std::size_t pos = 0;
    Bits bar = bits::bar_code(x);
    auto back = read_bar(bar, pos);
    if (!back || *back != x || pos != bar.size()) ok = false;

    Bits std_c = bits::std_code(x);
    pos = 0;
    auto len_bits = read_bar(std_c, pos);
    if (!len_bits || bits::to_nat(*len_bits) != x.size() ||
        std_c.substr(pos) != x)
      ok = false;

    Bits pair = bits::pair_code(x, "1011");
    if (pair.compare(0, std_c.size(), std_c) != 0 ||
        pair.substr(std_c.size()) != "1011")
      ok = false;
  }
  return r.note("codec-roundtrip", ok);
}

bool check_program_prefix_free(Reporter& r) {
  std::vector<Bits> valid;
  // Every bit string up to 12 bits, classified by the decoder.
  for_each_data_string(2, 12, [&](const Bits& s) {
    if (std::holds_alternative<Program>(decode_program(s))) valid.push_back(s);
    return true;
  });
  bool ok = valid.size() == enumerate::programs_upto(12).size();
  std::sort(valid.begin(), valid.end());
  for (std::size_t i = 0; i + 1 < valid.size(); ++i)
    if (is_prefix(valid[i], valid[i + 1])) ok = false;
  for (const Bits& s : valid) {
    auto d = decode_program(s);
    if (encode_program(std::get<Program>(d)) != s) ok = false;
  }
  r.out << "info program-prefix-free count=" << valid.size() << "\n";
  return r.note("program-prefix-free", ok);
}

bool check_pair_kraft(Reporter& r, const enumerate::ComplexityTable& t10) {
  r.out << "info pair-kraft sum=" << to_string(t10.kraft)
        << " entries=" << t10.entries.size() << "\n";
  return r.note("pair-kraft",
                t10.kraft == Rational(501, 1024) && t10.kraft <= Rational(1) &&
                    t10.entries.size() == 31);
}

bool check_witness_valid(Reporter& r, const enumerate::ComplexityTable& t10) {
  bool ok = true;
  for (const auto& [x, e] : t10.entries) {
    auto d = decode_program(e.witness_program);
    auto* q = std::get_if<Program>(&d);
    if (!q) {
      ok = false;
      continue;
    }
    auto out = eval(*q, e.witness_data, t10.aux, t10.budgets);
    if (!out.ok() || out.output() != x ||
        q->bit_len() + e.witness_data.size() != e.k)
      ok = false;
  }
  return r.note("witness-valid", ok);
}

bool check_conditional_dominance(Reporter& r,
                                 const enumerate::ComplexityTable& t10) {
  auto cond = enumerate::build_table(t10.budgets, "1");
  bool ok = true;
  for (const auto& [x, e] : t10.entries) {
    const auto* ce = cond.find(x);
    if (!ce || ce->k > e.k) ok = false;
  }
  return r.note("conditional-dominance", ok);
}

bool check_budget_monotone(Reporter& r, const enumerate::ComplexityTable& t10) {
  Budgets small = t10.budgets;
  small.max_pair_bits = small.max_program_bits = small.max_data_bits = 8;
  auto t8 = enumerate::build_table(small);
  bool ok = t8.kraft <= t10.kraft;
  for (const auto& [x, e] : t8.entries) {
    const auto* big = t10.find(x);
    if (!big || big->k > e.k) ok = false;
  }
  return r.note("budget-monotone", ok);
}

bool check_structure_shape(Reporter& r, const enumerate::ComplexityTable& t10) {
  bool ok = true;
  for (const auto& [x, e] : t10.entries) {
    auto curve = stats::structure_lambda(t10, x);
    auto soph = stats::sophistication(t10, x, {});
    if (soph.soph > e.k) ok = false;
    std::optional<uint32_t> prev;
    for (const auto& pt : curve) {
      if (pt.lambda && prev && *pt.lambda > *prev) ok = false;
      if (pt.lambda) prev = *pt.lambda;
      if (pt.alpha >= soph.soph && (!pt.lambda || *pt.lambda != e.k))
        ok = false;
    }
    if (!prev || *prev != e.k) ok = false;
  }
  return r.note("structure-shape", ok);
}

bool check_schedule_independence(Reporter& r,
                                 const enumerate::ComplexityTable& t10) {
  auto t3 = enumerate::build_table(t10.budgets, {}, {.workers = 3});
  return r.note("schedule-independence",
                snapshot::table_digest(t3) == snapshot::table_digest(t10));
}

}  // namespace

int run_selftest(std::ostream& out, bool flip_isa) {
  Reporter r{out, {}};
  auto codes = audit_codes(flip_isa);

  Budgets b10;
  b10.max_pair_bits = b10.max_program_bits = b10.max_data_bits = 10;
  auto t10 = enumerate::build_table(b10);

  bool ok = check_isa_prefix_free(r, codes);
  ok = check_isa_kraft(r, codes) && ok;
  ok = check_codec_roundtrip(r) && ok;
  ok = check_program_prefix_free(r) && ok;
  ok = check_pair_kraft(r, t10) && ok;
  ok = check_witness_valid(r, t10) && ok;
  ok = check_conditional_dominance(r, t10) && ok;
  ok = check_budget_monotone(r, t10) && ok;
  ok = check_structure_shape(r, t10) && ok;
  ok = check_schedule_independence(r, t10) && ok;

  if (ok) {
    out << "selftest pass\n";
    return 0;
  }
  out << "selftest FAIL first=" << r.first_failure << "\n";
  return 1;
}

}  // namespace sophlab::cli
