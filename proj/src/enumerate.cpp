#include "sophlab/enumerate.hpp"

#include <algorithm>
#include <thread>

#include "sophlab/errors.hpp"

namespace sophlab::enumerate {

namespace {

// Canonical pair order: total length, then program order (length, then
// encoding), then data. Within equal totals and program lengths the encoded
// strings have equal lengths, so plain string comparison is lexicographic.
bool pair_less(const Bits& q1, const Bits& d1, const Bits& q2,
               const Bits& d2) {
  std::size_t t1 = q1.size() + d1.size();
  std::size_t t2 = q2.size() + d2.size();
  if (t1 != t2) return t1 < t2;
  if (q1.size() != q2.size()) return q1.size() < q2.size();
  if (q1 != q2) return q1 < q2;
  return d1 < d2;
}

struct ProgInfo {
  Program prog;
  Bits bits;
  uint32_t reads = 0;      // READ count before the first READALL
  bool readall = false;    // has an effective READALL
  bool viable = true;      // false: a READ after a READALL, never succeeds
};

// Non-END instructions in code order; appending in this order yields
// encoding-lexicographic enumeration within a fixed length because the
// instruction code set is prefix-free.
constexpr std::array<Instr, 8> kBodyInstrs = {
    Instr::Zero, Instr::One,  Instr::Cat, Instr::Rep,
    Instr::Read, Instr::ReadAll, Instr::Dup, Instr::Aux};

// Body bit counts that some instruction sequence can realize exactly.
constexpr bool body_feasible(uint32_t r) { return r == 0 || r >= 3; }

template <typename Sink>
void gen_bodies(uint32_t remaining, std::vector<Instr>& cur, Sink&& sink) {
  if (remaining == 0) {
    sink(cur);
    return;
  }
  for (Instr op : kBodyInstrs) {
    uint32_t len = instr_bits(op);
    if (len <= remaining && body_feasible(remaining - len)) {
      cur.push_back(op);
      gen_bodies(remaining - len, cur, sink);
      cur.pop_back();
    }
  }
}

std::vector<ProgInfo> enumerate_prog_infos(uint32_t max_bits) {
  if (max_bits < 2) throw BadInputError("program budget below END");
  std::vector<ProgInfo> out;
  std::vector<Instr> cur;
  for (uint32_t body = 0; body + 2 <= max_bits; ++body) {
    if (!body_feasible(body)) continue;
    gen_bodies(body, cur, [&](const std::vector<Instr>& prefix) {
      std::vector<Instr> instrs = prefix;
      instrs.push_back(Instr::End);
      ProgInfo info{Program::from_instrs(std::move(instrs)), Bits(), 0, false,
                    true};
      info.bits = encode_program(info.prog);
      for (Instr op : info.prog.instrs()) {
        if (op == Instr::Read) {
          if (info.readall) {
            info.viable = false;  // reads past a READALL always exhaust
            break;
          }
          ++info.reads;
        } else if (op == Instr::ReadAll) {
          info.readall = true;
        }
      }
      out.push_back(std::move(info));
    });
  }
  return out;
}

// Data lengths that can possibly be consumed exactly by this program.
struct LengthRange {
  uint32_t lo = 0;
  uint32_t hi = 0;
  bool empty = true;
};

LengthRange data_lengths(const ProgInfo& p, const Budgets& b) {
  LengthRange r;
  if (!p.viable) return r;
  if (p.prog.bit_len() > b.max_pair_bits) return r;
  uint32_t cap = std::min(b.max_data_bits, b.max_pair_bits - p.prog.bit_len());
  if (!p.readall) {
    // Without READALL exactly `reads` bits are consumed on success.
    if (p.reads > cap) return r;
    r = {p.reads, p.reads, false};
    return r;
  }
  if (p.reads > cap) return r;
  r = {p.reads, cap, false};
  return r;
}

bool next_lex(Bits& s) {
  for (std::size_t i = s.size(); i-- > 0;) {
    if (s[i] == '0') {
      s[i] = '1';
      return true;
    }
    s[i] = '0';
  }
  return false;
}

// Order-independent accumulation: the final entry is the same for any
// partition of the pair stream.
void note_pair(TableEntry& e, const Bits& q, const Bits& d) {
  auto lq = static_cast<uint32_t>(q.size());
  auto ld = static_cast<uint32_t>(d.size());
  uint32_t total = lq + ld;

  if (e.optimal_count == 0 || total < e.k) {
    e.k = total;
    e.witness_program = q;
    e.witness_data = d;
    e.optimal_count = 1;
  } else if (total == e.k) {
    ++e.optimal_count;
    if (pair_less(q, d, e.witness_program, e.witness_data)) {
      e.witness_program = q;
      e.witness_data = d;
    }
  }

  // Pareto frontier maintenance; frontiers stay tiny at desk budgets.
  for (auto it = e.pareto.begin(); it != e.pareto.end();) {
    if (it->program_bits == lq && it->data_bits == ld) {
      if (pair_less(q, d, it->program, it->data)) {
        it->program = q;
        it->data = d;
      }
      return;
    }
    if (it->program_bits <= lq && it->data_bits <= ld) return;  // dominated
    if (lq <= it->program_bits && ld <= it->data_bits) {
      it = e.pareto.erase(it);
    } else {
      ++it;
    }
  }
  auto pos = std::lower_bound(
      e.pareto.begin(), e.pareto.end(), lq,
      [](const ParetoPoint& p, uint32_t v) { return p.program_bits < v; });
  e.pareto.insert(pos, ParetoPoint{lq, ld, q, d});
}

void merge_entry(TableEntry& into, TableEntry&& from) {
  if (from.k < into.k) {
    into.k = from.k;
    into.witness_program = from.witness_program;
    into.witness_data = from.witness_data;
    into.optimal_count = from.optimal_count;
  } else if (from.k == into.k) {
    into.optimal_count += from.optimal_count;
    if (pair_less(from.witness_program, from.witness_data,
                  into.witness_program, into.witness_data)) {
      into.witness_program = from.witness_program;
      into.witness_data = from.witness_data;
    }
  }
  for (ParetoPoint& p : from.pareto) {
    // Reuse the single-pair path; it performs the identical dominance logic.
    TableEntry& e = into;
    auto lq = p.program_bits;
    auto ld = p.data_bits;
    bool handled = false;
    for (auto it = e.pareto.begin(); it != e.pareto.end();) {
      if (it->program_bits == lq && it->data_bits == ld) {
        if (pair_less(p.program, p.data, it->program, it->data)) {
          it->program = std::move(p.program);
          it->data = std::move(p.data);
        }
        handled = true;
        break;
      }
      if (it->program_bits <= lq && it->data_bits <= ld) {
        handled = true;
        break;
      }
      if (lq <= it->program_bits && ld <= it->data_bits) {
        it = e.pareto.erase(it);
      } else {
        ++it;
      }
    }
    if (!handled) {
      auto pos = std::lower_bound(
          e.pareto.begin(), e.pareto.end(), lq,
          [](const ParetoPoint& q, uint32_t v) { return q.program_bits < v; });
      e.pareto.insert(pos, std::move(p));
    }
  }
}

struct ShardResult {
  std::unordered_map<Bits, TableEntry> entries;
  unsigned __int128 kraft_num = 0;  // sum of 2^(max_pair_bits - total)
};

void scan_shard(const std::vector<ProgInfo>& progs, std::size_t begin,
                std::size_t stride, const Budgets& b, const Bits& aux,
                ShardResult& out) {
  EvalScratch scratch;
  for (std::size_t i = begin; i < progs.size(); i += stride) {
    const ProgInfo& info = progs[i];
    LengthRange lens = data_lengths(info, b);
    if (lens.empty) continue;
    for (uint32_t n = lens.lo; n <= lens.hi; ++n) {
      Bits d(n, '0');
      do {
        EvalOutcome res = eval(info.prog, d, aux, b, scratch);
        if (res.ok()) {
          out.kraft_num += static_cast<unsigned __int128>(1)
                           << (b.max_pair_bits - info.prog.bit_len() - n);
          note_pair(out.entries[res.output()], info.bits, d);
        }
      } while (next_lex(d));
    }
  }
}

Rational kraft_from_num(unsigned __int128 num, uint32_t max_pair_bits) {
  // Reduce num / 2^max_pair_bits without leaving 64-bit rationals.
  uint32_t shift = max_pair_bits;
  while (shift > 0 && num != 0 && (num & 1) == 0) {
    num >>= 1;
    --shift;
  }
  if (num > static_cast<unsigned __int128>(INT64_MAX)) {
    throw std::overflow_error("kraft numerator out of range");
  }
  return Rational(static_cast<long long>(num),
                  static_cast<long long>(1) << shift);
}

}  // namespace

const TableEntry* ComplexityTable::find(const Bits& x) const {
  auto it = entries.find(x);
  return it == entries.end() ? nullptr : &it->second;
}

std::vector<const Bits*> ComplexityTable::sorted_keys() const {
  std::vector<const Bits*> keys;
  keys.reserve(entries.size());
  for (const auto& [key, entry] : entries) keys.push_back(&key);
  std::sort(keys.begin(), keys.end(), [](const Bits* a, const Bits* b) {
    return bits::canonical_less(*a, *b);
  });
  return keys;
}

bool ComplexityTable::operator==(const ComplexityTable& other) const {
  return budgets == other.budgets && aux == other.aux &&
         kraft == other.kraft && entries == other.entries;
}

std::vector<Program> programs_upto(uint32_t max_bits) {
  std::vector<ProgInfo> infos = enumerate_prog_infos(max_bits);
  std::vector<Program> out;
  out.reserve(infos.size());
  for (ProgInfo& info : infos) out.push_back(std::move(info.prog));
  return out;
}

ComplexityTable build_table(const Budgets& b, const Bits& aux,
                            const BuildOptions& opts) {
  b.validate();
  if (opts.workers == 0) throw BadInputError("workers must be >= 1");

  std::vector<ProgInfo> progs =
      enumerate_prog_infos(std::min(b.max_program_bits, b.max_pair_bits));

  uint64_t projected = 0;
  for (const ProgInfo& info : progs) {
    LengthRange lens = data_lengths(info, b);
    if (lens.empty) continue;
    for (uint32_t n = lens.lo; n <= lens.hi; ++n) {
      projected += uint64_t{1} << n;
      if (projected > opts.pair_cap) {
        throw ResourceExceededError(
            "projected pair count exceeds the safety cap");
      }
    }
  }

  unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(opts.workers,
                                                  std::max<std::size_t>(
                                                      progs.size(), 1)));
  std::vector<ShardResult> shards(workers);
  if (workers <= 1) {
    scan_shard(progs, 0, 1, b, aux, shards[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { scan_shard(progs, w, workers, b, aux,
                                            shards[w]); });
    }
    for (std::thread& t : pool) t.join();
  }

  ComplexityTable table;
  table.budgets = b;
  table.aux = aux;
  unsigned __int128 kraft_num = 0;
  table.entries = std::move(shards[0].entries);
  kraft_num += shards[0].kraft_num;
  for (unsigned w = 1; w < workers; ++w) {
    kraft_num += shards[w].kraft_num;
    for (auto& [x, entry] : shards[w].entries) {
      auto [it, inserted] = table.entries.try_emplace(x);
      if (inserted) {
        it->second = std::move(entry);
      } else {
        merge_entry(it->second, std::move(entry));
      }
    }
  }
  table.kraft = kraft_from_num(kraft_num, b.max_pair_bits);
  return table;
}

std::optional<uint32_t> k(const ComplexityTable& t, const Bits& x) {
  const TableEntry* e = t.find(x);
  if (e == nullptr) return std::nullopt;
  return e->k;
}

Rational kraft_sum(const Budgets& b, const Bits& aux) {
  // A successful pair is never pruned, so the built table's accumulator is
  // the exact sum; building also exercises the identical scan.
  return build_table(b, aux).kraft;
}

TableCache::TableCache(Budgets b, BuildOptions opts, std::size_t capacity)
    : budgets_(b), opts_(opts), capacity_(std::max<std::size_t>(capacity, 1)) {
  budgets_.validate();
}

std::shared_ptr<const ComplexityTable> TableCache::table_for(const Bits& aux) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto it = lru_.begin(); it != lru_.end(); ++it) {
      if (it->first == aux) {
        lru_.splice(lru_.begin(), lru_, it);
        return lru_.front().second;
      }
    }
  }
  auto table = std::make_shared<const ComplexityTable>(
      build_table(budgets_, aux, opts_));
  std::lock_guard<std::mutex> lock(mu_);
  lru_.emplace_front(aux, table);
  while (lru_.size() > capacity_) lru_.pop_back();
  return table;
}

std::optional<uint32_t> TableCache::k_cond(const Bits& x, const Bits& aux) {
  return k(*table_for(aux), x);
}

}  // namespace sophlab::enumerate
