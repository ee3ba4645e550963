// Truth tables for Boolean functions of 2 to 4 inputs, game equations
// f(questions) = g(answers), and the canonical reduction of the function
// space used by batch searches.
//
// Bit order is big-endian everywhere: input 0 (player 1, variable w at
// arity 4) is the most significant bit of the row index.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chsh {

inline constexpr int kMinArity = 2;
inline constexpr int kMaxArity = 4;

class TruthTable {
public:
  TruthTable() = default;

  /// Throws std::invalid_argument if arity is outside [2, 4] or `bits` has
  /// set positions beyond 2^arity.
  TruthTable(int arity, std::uint32_t bits);

  static TruthTable constant(int arity, bool value);
  static TruthTable projection(int arity, int variable);
  static TruthTable parity(int arity);

  /// Parses the `n:HEX` text encoding (e.g. "4:6996").
  static TruthTable parse(std::string_view text);

  int arity() const { return arity_; }
  std::uint32_t bits() const { return bits_; }
  std::uint32_t rows() const { return 1u << arity_; }
  std::uint32_t full_mask() const;

  bool at(std::uint32_t row) const { return (bits_ >> row) & 1u; }

  /// Evaluates on an input tuple given as one bit per variable, variable 0 first.
  bool evaluate(std::span<const int> inputs) const;

  TruthTable complement() const;

  /// Table of t(x XOR mask): inputs at the set bits of `mask` are negated.
  /// Mask bits follow the row-index convention (bit arity-1-i is variable i).
  TruthTable negate_inputs(std::uint32_t mask) const;

  /// Table of t'(x) = t(y) where y_i = x_{perm[i]}; perm must be a
  /// permutation of 0..arity-1.
  TruthTable permute_inputs(std::span<const int> perm) const;

  /// `n:HEX` with 2^n/4 lowercase hex digits.
  std::string to_string() const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;
  friend auto operator<=>(const TruthTable&, const TruthTable&) = default;

private:
  int arity_ = kMinArity;
  std::uint32_t bits_ = 0;
};

struct GameEquation {
  TruthTable f; // questions side
  TruthTable g; // answers side

  GameEquation() = default;
  /// Throws std::invalid_argument on arity mismatch.
  GameEquation(TruthTable f, TruthTable g);

  int arity() const { return f.arity(); }
  bool wins(std::uint32_t question, std::uint32_t answer) const {
    return f.at(question) == g.at(answer);
  }
  /// Bitmask over answers that win on `question`.
  std::uint32_t winning_answers(std::uint32_t question) const;

  friend bool operator==(const GameEquation&, const GameEquation&) = default;
};

/// Variables that influence the output, ascending.
std::vector<int> relevant_variables(const TruthTable& t);
bool all_variables_relevant(const TruthTable& t);

/// Distinct tables reachable by negating any subset of inputs, ascending.
std::vector<TruthTable> input_negation_variants(const TruthTable& t);

/// Numerically smallest table in the orbit of t under input negations, and
/// also under output complement when `include_output_flip` is set.
TruthTable canonical_representative(const TruthTable& t, bool include_output_flip);

struct ReductionCounts {
  std::uint64_t full_space = 0;
  std::uint64_t after_output_flip = 0;
  std::uint64_t after_negation_dedup = 0;
  std::uint64_t after_relevance = 0;
};

struct ReducedSpace {
  std::vector<TruthTable> functions;
  ReductionCounts counts;
};

/// Sorted canonical representatives of all 2^(2^arity) functions, optionally
/// restricted to those depending on every variable.
ReducedSpace reduce_function_space(int arity, bool require_all_relevant, bool include_output_flip);

} // namespace chsh
