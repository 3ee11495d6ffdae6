#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "sophlab/enumerate.hpp"
#include "sophlab/program.hpp"
#include "sophlab/rational.hpp"

namespace sophlab::models {

// A distortion value log2(scale), kept exact as the rational scale >= 1 so
// comparisons never round: log2(a) <= log2(b) iff a <= b. Set distortion is
// log2|S| (scale |S|), pmf distortion is log2(1/P(x)) (scale 1/P(x)), and
// function distortion is a data length (scale 2^len). Infinite means "no
// realization within the search cap", a budget statement.
class Distortion {
 public:
  static Distortion infinite() { return Distortion(true, Rational(1)); }
  static Distortion from_scale(const Rational& s);  // requires s >= 1
  static Distortion from_bits(uint32_t bits);

  bool is_infinite() const { return infinite_; }
  const Rational& scale() const;  // finite only
  double bits() const;            // log2(scale), for reports

  bool operator<=(const Distortion& o) const;
  bool operator==(const Distortion& o) const;

 private:
  Distortion(bool inf, Rational s) : infinite_(inf), scale_(std::move(s)) {}

  bool infinite_;
  Rational scale_;
};

struct FiniteSetModel {
  // Canonically sorted (length, then lex), duplicate-free, nonempty.
  std::vector<Bits> elements;

  static FiniteSetModel from_elements(std::vector<Bits> elements);
  bool contains(const Bits& x) const;
};

struct PmfModel {
  // Canonically sorted support with exact positive probabilities summing
  // to exactly 1.
  std::vector<std::pair<Bits, Rational>> support;

  static PmfModel from_support(std::vector<std::pair<Bits, Rational>> support);
  const Rational* probability(const Bits& x) const;
};

struct CodeTable {
  // Sorted by codeword (canonical order); codewords form a prefix-free code.
  std::vector<std::pair<Bits, Bits>> rows;  // codeword -> value

  static CodeTable from_rows(std::vector<std::pair<Bits, Bits>> rows);
};

struct FuncModel {
  std::variant<Program, CodeTable> fn;
};

using Model = std::variant<FiniteSetModel, PmfModel, FuncModel>;

struct DistortionBall {
  Distortion radius;
  std::vector<Bits> members;  // canonical order, duplicate-free
};

struct DeficiencyResult {
  uint64_t ball_size = 0;
  uint32_t k_hat = 0;          // min(k(t,x), ceil(log2 ball)+1)
  bool via_index_code = false; // true when the index-code bound was smaller
  double delta = 0.0;          // log2(ball_size) - k_hat
};

// Budgets supply the data-length search cap and eval limits for function
// models; set and pmf distortion ignore them.
Distortion distortion(const Bits& x, const Model& m, const Budgets& b);

// Exact member list of {y : distortion(y, m) <= r}. For function models the
// radius must be a whole number of bits no larger than b.max_data_bits
// (RadiusTooLargeError otherwise).
DistortionBall ball(const Model& m, const Distortion& r, const Budgets& b);

// |ball(m, r, b)| without materializing members; function-model counting
// shards the data strings across workers and merges marker bitmaps, so the
// count is worker-count independent.
uint64_t ball_size(const Model& m, const Distortion& r, const Budgets& b,
                   unsigned workers = 1);

// Randomness deficiency log2|B| - Khat(x | m, r) with the explicit upper
// bound Khat = min(k(t, x), ceil(log2|B|) + 1); reported deficiency is
// therefore a lower bound on true atypicality. r defaults to
// distortion(x, m). Throws NotInBallError when x is outside the ball.
DeficiencyResult deficiency(const enumerate::ComplexityTable& t, const Bits& x,
                            const Model& m, std::optional<Distortion> r,
                            const Budgets& b, unsigned workers = 1);

// |deficiency| <= theta.
bool is_typical(const enumerate::ComplexityTable& t, const Bits& x,
                const Model& m, uint32_t theta, const Budgets& b,
                unsigned workers = 1);

// Uniform pmf on the set's elements.
PmfModel set_to_pmf(const FiniteSetModel& s);

// Canonical Shannon-Fano code for the support: each element gets a codeword
// of length ceil(log2(1/P)); elements are processed by descending
// probability (ties by ascending lexicographic order) and each receives the
// lexicographically least codeword of its length compatible with prefix
// freeness. Returns the lookup-table function model.
FuncModel pmf_to_func(const PmfModel& p);

// The set of strings whose minimal preimage under f is no longer than x's.
// Throws NoPreimageError when x has no preimage within b.max_data_bits.
FiniteSetModel func_to_set(const FuncModel& f, const Bits& x, const Budgets& b);

// Serialized description length in bits: sets sum the self-delimiting code
// of each element; pmfs add the codes of each numerator and denominator;
// program functions cost their encoding; lookup tables sum the codes of
// each codeword and value.
uint64_t model_dl(const Model& m);

void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace sophlab::models
