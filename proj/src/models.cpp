#include "sophlab/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "sophlab/errors.hpp"
#include "sophlab/search.hpp"

namespace sophlab::models {

namespace {

// Rank of a string in canonical order: all 2^l - 1 shorter strings first,
// then the value of the string itself read as a binary numeral. Used to
// index ball-membership bitmaps, so members longer than 32 bits are refused
// rather than silently miscounted.
constexpr uint32_t kMaxRankLen = 32;

uint64_t rank_of(const Bits& y) {
  if (y.size() > kMaxRankLen) {
    throw ResourceExceededError("ball member of length " +
                                std::to_string(y.size()) +
                                " exceeds the countable range");
  }
  uint64_t value = 0;
  for (char c : y) value = (value << 1) | (c == '1' ? 1u : 0u);
  return ((uint64_t{1} << y.size()) - 1) + value;
}

Bits string_of_rank(uint64_t rank) {
  uint64_t t = rank + 1;
  uint32_t len = static_cast<uint32_t>(std::bit_width(t)) - 1;
  uint64_t value = t - (uint64_t{1} << len);
  Bits s(len, '0');
  for (uint32_t i = 0; i < len; ++i) {
    if ((value >> (len - 1 - i)) & 1) s[i] = '1';
  }
  return s;
}

struct Bitmap {
  std::vector<uint64_t> words;

  void mark(uint64_t r) {
    std::size_t w = static_cast<std::size_t>(r >> 6);
    if (w >= words.size()) words.resize(w + 1, 0);
    words[w] |= uint64_t{1} << (r & 63);
  }
  void merge(const Bitmap& other) {
    if (other.words.size() > words.size()) words.resize(other.words.size(), 0);
    for (std::size_t i = 0; i < other.words.size(); ++i) {
      words[i] |= other.words[i];
    }
  }
  uint64_t count() const {
    uint64_t n = 0;
    for (uint64_t w : words) n += static_cast<uint64_t>(std::popcount(w));
    return n;
  }
};

// Evaluates q on every data string with rank in [lo, hi) and marks the rank
// of each successful output. The data string is stepped as a binary odometer
// so the scan is cheap relative to eval itself.
void scan_data_range(const Program& q, const Budgets& b, uint64_t lo,
                     uint64_t hi, Bitmap& out) {
  if (lo >= hi) return;
  EvalScratch scratch;
  Bits d = string_of_rank(lo);
  for (uint64_t g = lo; g < hi; ++g) {
    EvalOutcome res = eval(q, d, Bits{}, b, scratch);
    if (res.ok()) out.mark(rank_of(res.output()));
    std::size_t i = d.size();
    while (i > 0 && d[i - 1] == '1') d[--i] = '0';
    if (i > 0) {
      d[i - 1] = '1';
    } else {
      d.assign(d.size() + 1, '0');
    }
  }
}

Bitmap mark_reachable(const Program& q, uint32_t cap_len, const Budgets& b,
                      unsigned workers) {
  uint64_t total = (uint64_t{1} << (cap_len + 1)) - 1;
  if (workers == 0) workers = 1;
  workers = static_cast<unsigned>(
      std::min<uint64_t>(workers, std::max<uint64_t>(total, 1)));
  if (workers == 1) {
    Bitmap bm;
    scan_data_range(q, b, 0, total, bm);
    return bm;
  }
  std::vector<Bitmap> parts(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    uint64_t lo = total * w / workers;
    uint64_t hi = total * (w + 1) / workers;
    pool.emplace_back(scan_data_range, std::cref(q), std::cref(b), lo, hi,
                      std::ref(parts[w]));
  }
  for (std::thread& th : pool) th.join();
  Bitmap bm;
  for (const Bitmap& p : parts) bm.merge(p);
  return bm;
}

// Largest whole data length within the radius: l <= log2(scale) iff
// 2^l <= scale. Function-model balls enumerate data up to this length.
uint32_t radius_data_cap(const Distortion& r, const Budgets& b) {
  if (r.is_infinite()) {
    throw RadiusTooLargeError("ball radius must be finite");
  }
  uint32_t cap = floor_log2(r.scale());
  if (cap > b.max_data_bits) {
    throw RadiusTooLargeError("radius " + std::to_string(cap) +
                              " bits exceeds the data budget " +
                              std::to_string(b.max_data_bits));
  }
  return cap;
}

// Minimal codeword length per distinct value of a lookup table.
std::unordered_map<Bits, uint32_t> min_codeword_lens(const CodeTable& t) {
  std::unordered_map<Bits, uint32_t> m;
  for (const auto& [cw, value] : t.rows) {
    auto len = static_cast<uint32_t>(cw.size());
    auto [it, fresh] = m.emplace(value, len);
    if (!fresh && len < it->second) it->second = len;
  }
  return m;
}

void sort_canonical(std::vector<Bits>& v) {
  std::sort(v.begin(), v.end(), bits::canonical_less);
}

uint64_t std_code_len(const Bits& x) { return bits::std_code(x).size(); }

uint64_t nat_code_len(long long n) {
  return std_code_len(bits::from_nat(static_cast<uint64_t>(n)));
}

}  // namespace

Distortion Distortion::from_scale(const Rational& s) {
  if (s < Rational(1)) {
    throw BadInputError("distortion scale below 1: " + to_string(s));
  }
  return Distortion(false, s);
}

Distortion Distortion::from_bits(uint32_t bits) {
  if (bits >= 62) throw BadInputError("distortion bits out of range");
  return Distortion(false, Rational(int64_t{1} << bits));
}

const Rational& Distortion::scale() const {
  if (infinite_) throw Error("infinite distortion has no scale");
  return scale_;
}

double Distortion::bits() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  return std::log2(boost::rational_cast<double>(scale_));
}

bool Distortion::operator<=(const Distortion& o) const {
  if (o.infinite_) return true;
  if (infinite_) return false;
  return scale_ <= o.scale_;
}

bool Distortion::operator==(const Distortion& o) const {
  if (infinite_ != o.infinite_) return false;
  return infinite_ || scale_ == o.scale_;
}

FiniteSetModel FiniteSetModel::from_elements(std::vector<Bits> elements) {
  if (elements.empty()) throw BadInputError("set model must be nonempty");
  for (const Bits& e : elements) {
    if (!bits::valid(e)) throw BadInputError("set element is not a bit string");
  }
  sort_canonical(elements);
  auto dup = std::adjacent_find(elements.begin(), elements.end());
  if (dup != elements.end()) {
    throw BadInputError("duplicate set element: \"" + *dup + "\"");
  }
  return FiniteSetModel{std::move(elements)};
}

bool FiniteSetModel::contains(const Bits& x) const {
  return std::binary_search(elements.begin(), elements.end(), x,
                            bits::canonical_less);
}

PmfModel PmfModel::from_support(
    std::vector<std::pair<Bits, Rational>> support) {
  if (support.empty()) throw BadInputError("pmf must have nonempty support");
  Rational sum(0);
  for (const auto& [x, p] : support) {
    if (!bits::valid(x)) throw BadInputError("pmf key is not a bit string");
    if (p <= Rational(0)) {
      throw BadInputError("pmf probability must be positive: \"" + x + "\"");
    }
    sum += p;
  }
  if (sum != Rational(1)) {
    throw BadInputError("pmf probabilities sum to " + to_string(sum) +
                        ", not 1");
  }
  std::sort(support.begin(), support.end(), [](const auto& a, const auto& b) {
    return bits::canonical_less(a.first, b.first);
  });
  for (std::size_t i = 1; i < support.size(); ++i) {
    if (support[i - 1].first == support[i].first) {
      throw BadInputError("duplicate pmf entry: \"" + support[i].first + "\"");
    }
  }
  return PmfModel{std::move(support)};
}

const Rational* PmfModel::probability(const Bits& x) const {
  auto it = std::lower_bound(
      support.begin(), support.end(), x,
      [](const auto& entry, const Bits& key) {
        return bits::canonical_less(entry.first, key);
      });
  if (it == support.end() || it->first != x) return nullptr;
  return &it->second;
}

CodeTable CodeTable::from_rows(std::vector<std::pair<Bits, Bits>> rows) {
  if (rows.empty()) throw BadInputError("code table must be nonempty");
  for (const auto& [cw, value] : rows) {
    if (!bits::valid(cw) || !bits::valid(value)) {
      throw BadInputError("code table entries must be bit strings");
    }
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return bits::canonical_less(a.first, b.first);
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const Bits& a = rows[i].first;
      const Bits& b = rows[j].first;
      if (b.compare(0, a.size(), a) == 0) {
        throw BadInputError(a == b ? "duplicate codeword: \"" + a + "\""
                                   : "codewords are not prefix-free: \"" + a +
                                         "\" prefixes \"" + b + "\"");
      }
    }
  }
  return CodeTable{std::move(rows)};
}

Distortion distortion(const Bits& x, const Model& m, const Budgets& b) {
  return std::visit(
      [&](const auto& model) -> Distortion {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, FiniteSetModel>) {
          if (!model.contains(x)) return Distortion::infinite();
          return Distortion::from_scale(
              Rational(static_cast<long long>(model.elements.size())));
        } else if constexpr (std::is_same_v<T, PmfModel>) {
          const Rational* p = model.probability(x);
          if (p == nullptr) return Distortion::infinite();
          return Distortion::from_scale(
              Rational(p->denominator(), p->numerator()));
        } else {
          if (const auto* q = std::get_if<Program>(&model.fn)) {
            std::optional<uint32_t> len =
                min_preimage_len(*q, x, Bits{}, b, b.max_data_bits);
            if (!len) return Distortion::infinite();
            return Distortion::from_bits(*len);
          }
          const auto& table = std::get<CodeTable>(model.fn);
          std::optional<uint32_t> best;
          for (const auto& [cw, value] : table.rows) {
            if (value != x) continue;
            auto len = static_cast<uint32_t>(cw.size());
            if (!best || len < *best) best = len;
          }
          if (!best) return Distortion::infinite();
          return Distortion::from_bits(*best);
        }
      },
      m);
}

DistortionBall ball(const Model& m, const Distortion& r, const Budgets& b) {
  if (r.is_infinite()) throw RadiusTooLargeError("ball radius must be finite");
  std::vector<Bits> members = std::visit(
      [&](const auto& model) -> std::vector<Bits> {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, FiniteSetModel>) {
          // Every member of S sits at distortion log2|S|, so the ball is
          // all of S or nothing.
          Rational size(static_cast<long long>(model.elements.size()));
          if (size <= r.scale()) return model.elements;
          return {};
        } else if constexpr (std::is_same_v<T, PmfModel>) {
          std::vector<Bits> out;
          for (const auto& [x, p] : model.support) {
            if (Rational(p.denominator(), p.numerator()) <= r.scale()) {
              out.push_back(x);
            }
          }
          return out;
        } else {
          uint32_t cap = radius_data_cap(r, b);
          if (const auto* q = std::get_if<Program>(&model.fn)) {
            Bitmap bm = mark_reachable(*q, cap, b, 1);
            std::vector<Bits> out;
            for (std::size_t w = 0; w < bm.words.size(); ++w) {
              uint64_t word = bm.words[w];
              while (word != 0) {
                int bit = std::countr_zero(word);
                word &= word - 1;
                out.push_back(string_of_rank(uint64_t{w} * 64 + bit));
              }
            }
            return out;  // rank order is canonical order
          }
          const auto& table = std::get<CodeTable>(model.fn);
          std::vector<Bits> out;
          for (const auto& [value, len] : min_codeword_lens(table)) {
            if (len <= cap) out.push_back(value);
          }
          sort_canonical(out);
          return out;
        }
      },
      m);
  return DistortionBall{r, std::move(members)};
}

uint64_t ball_size(const Model& m, const Distortion& r, const Budgets& b,
                   unsigned workers) {
  if (const auto* f = std::get_if<FuncModel>(&m)) {
    if (const auto* q = std::get_if<Program>(&f->fn)) {
      if (r.is_infinite()) {
        throw RadiusTooLargeError("ball radius must be finite");
      }
      uint32_t cap = radius_data_cap(r, b);
      return mark_reachable(*q, cap, b, workers).count();
    }
  }
  return ball(m, r, b).members.size();
}

DeficiencyResult deficiency(const enumerate::ComplexityTable& t, const Bits& x,
                            const Model& m, std::optional<Distortion> r,
                            const Budgets& b, unsigned workers) {
  Distortion dx = distortion(x, m, b);
  if (dx.is_infinite()) {
    throw NotInBallError("\"" + x + "\" has no finite distortion to the model");
  }
  Distortion radius = r.value_or(dx);
  if (!(dx <= radius)) {
    throw NotInBallError("\"" + x + "\" lies outside the radius");
  }
  uint64_t n = ball_size(m, radius, b, workers);
  uint32_t index_bound =
      ceil_log2(Rational(static_cast<long long>(n))) + 1;
  std::optional<uint32_t> kx = enumerate::k(t, x);
  DeficiencyResult out;
  out.ball_size = n;
  out.via_index_code = !kx || index_bound < *kx;
  out.k_hat = out.via_index_code ? index_bound : *kx;
  out.delta = std::log2(static_cast<double>(n)) - out.k_hat;
  return out;
}

bool is_typical(const enumerate::ComplexityTable& t, const Bits& x,
                const Model& m, uint32_t theta, const Budgets& b,
                unsigned workers) {
  DeficiencyResult d = deficiency(t, x, m, std::nullopt, b, workers);
  return std::abs(d.delta) <= static_cast<double>(theta);
}

PmfModel set_to_pmf(const FiniteSetModel& s) {
  Rational each(1, static_cast<long long>(s.elements.size()));
  std::vector<std::pair<Bits, Rational>> support;
  support.reserve(s.elements.size());
  for (const Bits& e : s.elements) support.emplace_back(e, each);
  return PmfModel::from_support(std::move(support));
}

FuncModel pmf_to_func(const PmfModel& p) {
  // Codeword lengths ceil(log2(1/P)) assigned in order of descending
  // probability, ties by plain lexicographic order of the strings. With
  // lengths nondecreasing along that order, taking the numerically next
  // codeword and widening is exactly the greedy lexicographically-least
  // prefix-free assignment; Kraft keeps the counter inside its width.
  std::vector<std::pair<Bits, Rational>> order = p.support;
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::pair<Bits, Bits>> rows;
  rows.reserve(order.size());
  uint64_t code = 0;
  uint32_t width = 0;
  bool first = true;
  for (const auto& [x, prob] : order) {
    uint32_t len = ceil_log2(Rational(prob.denominator(), prob.numerator()));
    if (first) {
      width = len;
      first = false;
    } else {
      if (len < width) throw Error("code lengths are not nondecreasing");
      code = (code + 1) << (len - width);
      width = len;
    }
    if (width > 0 && (code >> width) != 0) {
      throw Error("code assignment overflowed its width");
    }
    Bits cw(width, '0');
    for (uint32_t i = 0; i < width; ++i) {
      if ((code >> (width - 1 - i)) & 1) cw[i] = '1';
    }
    rows.emplace_back(std::move(cw), x);
  }
  return FuncModel{CodeTable::from_rows(std::move(rows))};
}

FiniteSetModel func_to_set(const FuncModel& f, const Bits& x,
                           const Budgets& b) {
  Model m = f;
  Distortion dx = distortion(x, m, b);
  if (dx.is_infinite()) {
    throw NoPreimageError("\"" + x + "\" has no preimage within " +
                          std::to_string(b.max_data_bits) + " data bits");
  }
  DistortionBall bl = ball(m, dx, b);
  return FiniteSetModel::from_elements(std::move(bl.members));
}

uint64_t model_dl(const Model& m) {
  return std::visit(
      [](const auto& model) -> uint64_t {
        using T = std::decay_t<decltype(model)>;
        uint64_t total = 0;
        if constexpr (std::is_same_v<T, FiniteSetModel>) {
          for (const Bits& e : model.elements) total += std_code_len(e);
        } else if constexpr (std::is_same_v<T, PmfModel>) {
          for (const auto& [x, p] : model.support) {
            total += std_code_len(x);
            total += nat_code_len(p.numerator());
            total += nat_code_len(p.denominator());
          }
        } else {
          if (const auto* q = std::get_if<Program>(&model.fn)) {
            total = q->bit_len();
          } else {
            for (const auto& [cw, value] : std::get<CodeTable>(model.fn).rows) {
              total += std_code_len(cw) + std_code_len(value);
            }
          }
        }
        return total;
      },
      m);
}

namespace {

constexpr std::string_view kModelHeader = "sophlab-model v1";

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

void save_model(const Model& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << kModelHeader << "\n";
  std::visit(
      [&out](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, FiniteSetModel>) {
          out << "set:\n";
          for (const Bits& e : model.elements) out << e << "\n";
        } else if constexpr (std::is_same_v<T, PmfModel>) {
          out << "pmf:\n";
          for (const auto& [x, p] : model.support) {
            // The empty string writes as a probability-only line.
            if (x.empty()) {
              out << to_string(p) << "\n";
            } else {
              out << x << " " << to_string(p) << "\n";
            }
          }
        } else {
          out << "func:\n";
          if (const auto* q = std::get_if<Program>(&model.fn)) {
            out << encode_program(*q) << "\n";
          } else {
            out << "table:\n";
            for (const auto& [cw, value] : std::get<CodeTable>(model.fn).rows) {
              if (value.empty()) {
                out << cw << "\n";
              } else {
                out << cw << " " << value << "\n";
              }
            }
          }
        }
      },
      m);
  if (!out.flush()) throw IoError("short write to " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (lines.empty() || lines[0] != kModelHeader) {
    throw BadInputError("model file must start with \"" +
                        std::string(kModelHeader) + "\"");
  }
  if (lines.size() < 2) throw BadInputError("model file has no section line");
  const std::string& section = lines[1];

  if (section == "set:") {
    // Every following line is one element; an empty line is the empty
    // string.
    std::vector<Bits> elements;
    for (std::size_t i = 2; i < lines.size(); ++i) {
      elements.push_back(bits::parse(lines[i]));
    }
    return FiniteSetModel::from_elements(std::move(elements));
  }

  if (section == "pmf:") {
    std::vector<std::pair<Bits, Rational>> support;
    for (std::size_t i = 2; i < lines.size(); ++i) {
      auto toks = tokens_of(lines[i]);
      if (toks.size() == 1) {
        support.emplace_back(Bits{}, parse_rational(toks[0]));
      } else if (toks.size() == 2) {
        support.emplace_back(bits::parse(toks[0]), parse_rational(toks[1]));
      } else {
        throw BadInputError("bad pmf line: \"" + lines[i] + "\"");
      }
    }
    return PmfModel::from_support(std::move(support));
  }

  if (section == "func:") {
    if (lines.size() < 3) throw BadInputError("func model has no body");
    if (lines[2] == "table:") {
      std::vector<std::pair<Bits, Bits>> rows;
      for (std::size_t i = 3; i < lines.size(); ++i) {
        auto toks = tokens_of(lines[i]);
        if (toks.size() == 1) {
          rows.emplace_back(bits::parse(toks[0]), Bits{});
        } else if (toks.size() == 2) {
          rows.emplace_back(bits::parse(toks[0]), bits::parse(toks[1]));
        } else {
          throw BadInputError("bad table line: \"" + lines[i] + "\"");
        }
      }
      return FuncModel{CodeTable::from_rows(std::move(rows))};
    }
    if (lines.size() != 3) {
      throw BadInputError("program func model must be a single line");
    }
    DecodeResult dec = decode_program(bits::parse(lines[2]));
    if (const auto* p = std::get_if<Program>(&dec)) return FuncModel{*p};
    throw BadInputError("func model bits do not decode to a program");
  }

  throw BadInputError("unknown model section: \"" + section + "\"");
}

}  // namespace sophlab::models
