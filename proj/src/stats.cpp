#include "sophlab/stats.hpp"

#include <algorithm>
#include <thread>

#include "sophlab/errors.hpp"
#include "sophlab/search.hpp"

namespace sophlab::stats {

namespace {

const enumerate::TableEntry& require_entry(const enumerate::ComplexityTable& t,
                                           const Bits& x) {
  const enumerate::TableEntry* e = t.find(x);
  if (e == nullptr) throw UnknownStringError(x);
  return *e;
}

// The frontier point realizing the sophistication at slack c, if any pair
// within the slack exists. Points are sorted by program length, so the first
// hit is the minimum.
const enumerate::ParetoPoint* soph_point(const enumerate::TableEntry& e,
                                         uint32_t c) {
  for (const enumerate::ParetoPoint& p : e.pareto) {
    if (p.program_bits + p.data_bits <= e.k + c) return &p;
  }
  return nullptr;
}

SophResult result_from_point(const enumerate::TableEntry& e,
                             const enumerate::ParetoPoint& p) {
  auto decoded = decode_program(p.program);
  // Table witnesses are encodings produced by the enumerator; failure here
  // would mean a corrupted table.
  return SophResult{p.program_bits, std::get<Program>(decoded), p.data,
                    e.k, p.program_bits + p.data_bits - e.k};
}

}  // namespace

const std::vector<enumerate::ParetoPoint>& pareto_pairs(
    const enumerate::ComplexityTable& t, const Bits& x) {
  return require_entry(t, x).pareto;
}

bool is_sufficient(const enumerate::ComplexityTable& t, const Program& q,
                   const Bits& x, const SufficiencyParams& p) {
  const enumerate::TableEntry& e = require_entry(t, x);
  const Budgets& b = t.budgets;
  if (q.bit_len() > b.max_program_bits || q.bit_len() > b.max_pair_bits) {
    return false;
  }
  uint32_t data_cap =
      std::min(b.max_data_bits, b.max_pair_bits - q.bit_len());
  std::optional<uint32_t> len = min_preimage_len(q, x, t.aux, b, data_cap);
  return len.has_value() && q.bit_len() + *len <= e.k + p.c;
}

SophResult sophistication(const enumerate::ComplexityTable& t, const Bits& x,
                          const SufficiencyParams& p) {
  const enumerate::TableEntry& e = require_entry(t, x);
  const enumerate::ParetoPoint* best = soph_point(e, p.c);
  // The optimal pair always qualifies at any c, so a hit is guaranteed.
  return result_from_point(e, *best);
}

std::vector<StructurePoint> structure_lambda(const enumerate::ComplexityTable& t,
                                             const Bits& x) {
  const enumerate::TableEntry& e = require_entry(t, x);
  std::vector<StructurePoint> out;
  out.reserve(t.budgets.max_program_bits + 1);
  for (uint32_t alpha = 0; alpha <= t.budgets.max_program_bits; ++alpha) {
    StructurePoint sp;
    sp.alpha = alpha;
    // Every total-minimizing pair with program part <= alpha lies on the
    // frontier, and data length shrinks as program length grows, so the
    // widest feasible achiever has the minimal data length.
    for (const enumerate::ParetoPoint& pt : e.pareto) {
      if (pt.program_bits > alpha) break;
      uint32_t total = pt.program_bits + pt.data_bits;
      if (!sp.lambda || total <= *sp.lambda) {
        sp.lambda = total;
        sp.h = pt.data_bits;
      }
    }
    out.push_back(std::move(sp));
  }
  return out;
}

uint64_t count_optimal_pairs(const enumerate::ComplexityTable& t,
                             const Bits& x) {
  return require_entry(t, x).optimal_count;
}

std::pair<Bits, uint64_t> max_optimal_count(
    const enumerate::ComplexityTable& t) {
  Bits arg;
  uint64_t best = 0;
  for (const Bits* key : t.sorted_keys()) {
    uint64_t c = t.entries.at(*key).optimal_count;
    if (c > best) {
      best = c;
      arg = *key;
    }
  }
  return {arg, best};
}

int64_t mutual_info(enumerate::TableCache& cache, const Bits& x, const Bits& y,
                    MutualMode mode) {
  auto base = cache.table_for(Bits{});
  Bits aux;
  if (mode == MutualMode::AuxIsString) {
    aux = x;
  } else {
    const enumerate::TableEntry& ex = require_entry(*base, x);
    aux = ex.witness_program + ex.witness_data;
  }
  std::optional<uint32_t> ky = enumerate::k(*base, y);
  if (!ky) throw UnknownStringError(y);
  std::optional<uint32_t> ky_aux = cache.k_cond(y, aux);
  if (!ky_aux) throw UnknownStringError(y);
  return static_cast<int64_t>(*ky) - static_cast<int64_t>(*ky_aux);
}

MaxSophResult max_soph_of_length(const enumerate::ComplexityTable& t,
                                 uint32_t n, const SufficiencyParams& p,
                                 unsigned workers) {
  std::vector<const Bits*> candidates;
  for (const Bits* key : t.sorted_keys()) {
    if (key->size() == n) candidates.push_back(key);
  }
  if (candidates.empty()) {
    throw NoCoverageError("no length-" + std::to_string(n) +
                          " string within budget");
  }

  // Per-worker best as (soph, candidate index); the merge prefers higher
  // soph, then the earlier candidate, so the argmax is the lex-least string
  // regardless of sharding.
  struct Best {
    uint32_t soph = 0;
    std::size_t index = 0;
    bool any = false;
  };
  if (workers == 0) workers = 1;
  workers = std::min<unsigned>(workers, candidates.size());
  std::vector<Best> bests(workers);
  auto scan = [&](unsigned w) {
    Best local;
    for (std::size_t i = w; i < candidates.size(); i += workers) {
      const enumerate::TableEntry& e = t.entries.at(*candidates[i]);
      uint32_t soph = soph_point(e, p.c)->program_bits;
      if (!local.any || soph > local.soph) {
        local = Best{soph, i, true};
      }
    }
    bests[w] = local;
  };
  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w);
    for (std::thread& th : pool) th.join();
  }

  Best overall;
  for (const Best& b : bests) {
    if (!b.any) continue;
    if (!overall.any || b.soph > overall.soph ||
        (b.soph == overall.soph && b.index < overall.index)) {
      overall = b;
    }
  }
  const Bits& arg = *candidates[overall.index];
  const enumerate::TableEntry& e = t.entries.at(arg);
  uint64_t total_of_length = n >= 63 ? ~uint64_t{0} : (uint64_t{1} << n);
  return MaxSophResult{arg, result_from_point(e, *soph_point(e, p.c)),
                       total_of_length - candidates.size()};
}

}  // namespace sophlab::stats
