#include "chsh/classical.hpp"

#include <stdexcept>

namespace chsh {

ClassicalStrategy::ClassicalStrategy(int players, std::uint32_t encoding) : players_(players), encoding_(encoding) {
  if (players < 1 || players > 15) throw std::invalid_argument("player count out of range");
  if (encoding >> (2 * players)) throw std::invalid_argument("strategy encoding exceeds 2n bits");
}

int ClassicalStrategy::answer(int player, int question) const {
  const int shift = 2 * (players_ - 1 - player) + (question ? 0 : 1);
  return static_cast<int>((encoding_ >> shift) & 1u);
}

std::uint32_t ClassicalStrategy::answers_for(std::uint32_t question) const {
  std::uint32_t a = 0;
  for (int i = 0; i < players_; ++i) {
    const int q = static_cast<int>((question >> (players_ - 1 - i)) & 1u);
    a = (a << 1) | static_cast<std::uint32_t>(answer(i, q));
  }
  return a;
}

double classical_gain(const GameEquation& eq, const ClassicalStrategy& s) {
  if (s.players() != eq.arity()) throw std::invalid_argument("strategy and equation arity differ");
  const std::uint32_t questions = 1u << eq.arity();
  int won = 0;
  for (std::uint32_t q = 0; q < questions; ++q) won += eq.wins(q, s.answers_for(q));
  return static_cast<double>(won) / questions;
}

ClassicalOptimum classical_best(const GameEquation& eq) {
  const int n = eq.arity();
  const std::uint32_t questions = 1u << n;
  std::vector<std::uint32_t> winning(questions);
  for (std::uint32_t q = 0; q < questions; ++q) winning[q] = eq.winning_answers(q);

  ClassicalOptimum best;
  best.questions_won = -1;
  for (std::uint32_t code = 0; code < (1u << (2 * n)); ++code) {
    const ClassicalStrategy s(n, code);
    int won = 0;
    for (std::uint32_t q = 0; q < questions; ++q) won += (winning[q] >> s.answers_for(q)) & 1u;
    if (won > best.questions_won) {
      best.questions_won = won;
      best.maximizers.clear();
    }
    if (won == best.questions_won) best.maximizers.push_back(s);
  }
  best.gain = static_cast<double>(best.questions_won) / questions;
  return best;
}

} // namespace chsh
