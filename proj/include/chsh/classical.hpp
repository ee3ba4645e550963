#pragma once

#include "chsh/truth_table.hpp"

#include <cstdint>
#include <vector>

namespace chsh {

/// Deterministic strategy: player i answers answer(i, q) on question bit q.
/// Encoded in 2n bits, player 1's pair most significant and h_i(0) above
/// h_i(1) within a pair.
class ClassicalStrategy {
public:
  ClassicalStrategy(int players, std::uint32_t encoding);

  int players() const { return players_; }
  std::uint32_t encoding() const { return encoding_; }
  int answer(int player, int question) const;

  /// Big-endian answer index for a big-endian question index.
  std::uint32_t answers_for(std::uint32_t question) const;

  friend bool operator==(const ClassicalStrategy&, const ClassicalStrategy&) = default;

private:
  int players_;
  std::uint32_t encoding_;
};

/// Fraction of the 2^n questions won.
double classical_gain(const GameEquation& eq, const ClassicalStrategy& s);

struct ClassicalOptimum {
  double gain = 0.0;
  int questions_won = 0;
  std::vector<ClassicalStrategy> maximizers; // ascending encoding
};

/// Exhaustive over all 2^(2n) deterministic strategies.
ClassicalOptimum classical_best(const GameEquation& eq);

} // namespace chsh
