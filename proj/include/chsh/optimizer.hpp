// Multi-start local maximization of the quantum winning probability.
//
// Only the measurement direction of each gate matters: with U applied before
// a computational-basis readout, answer 0 is the projector onto U^dag|0>, a
// point m on the Bloch sphere. For fixed gates of the other players the
// winning probability is affine in each of player i's two directions, so the
// best response is m = v / |v| for a vector v computed from the other
// players' post-gate amplitudes. The local ascent cycles through players
// applying best responses; every step is non-decreasing.
#pragma once

#include "chsh/state_vector.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace chsh {

struct OptimizerConfig {
  int restarts = 20;
  /// Per restart; one player's best-response update or one full objective
  /// evaluation each count as one.
  int max_evaluations = 5000;
  /// Restarts from the best strategy so far with 2..n random players re-randomized.
  int perturbations = 40;
  /// Stop a restart once a full cycle over players gains less than this.
  double tolerance = 1e-6;
  std::uint64_t seed = 0x43485348ull;

  /// Throws std::invalid_argument on non-positive counts or tolerance.
  void validate() const;
};

using Vec3 = std::array<double, 3>;

/// Bloch vector of U^dag|0>, the direction measured as answer 0.
Vec3 measurement_direction(const Mat2& gate);

/// Angles (theta, 0, lambda) whose gate measures along the unit vector `m`.
UnitaryParams params_for_direction(const Vec3& m);

/// Precomputed winning masks for repeated evaluation on one state/equation.
class WinEvaluator {
public:
  WinEvaluator(const StateVector& psi, const GameEquation& eq);

  int players() const { return players_; }

  /// Winning probability for gates laid out as gates[2 * player + question].
  /// Shares partial products across questions with a common prefix.
  double value(std::span<const Mat2> gates) const;

  /// Unnormalized best-response vectors for `player` on questions 0 and 1.
  std::array<Vec3, 2> response_vectors(std::span<const Mat2> gates, int player) const;

private:
  void descend(std::span<const Mat2> gates, int level, std::uint32_t question, std::vector<std::vector<Complex>>& bufs,
               double& total) const;

  int players_;
  StateVector psi_;
  std::vector<std::uint32_t> winning_;
};

struct AscentResult {
  QuantumStrategy strategy;
  double gain = 0.0; // re-evaluated with win_probability
  int evaluations = 0;
  int cycles = 0;
};

/// Best-response ascent from `start` until a cycle improves by less than the
/// tolerance or the evaluation budget is spent.
AscentResult local_ascent(const WinEvaluator& evaluator, const StateVector& psi, const GameEquation& eq,
                          const QuantumStrategy& start, const OptimizerConfig& cfg);

struct QuantumOptimum {
  double gain = 0.0;
  QuantumStrategy strategy; // angles reduced into [0, 4 pi)
  int best_restart = -1;    // >= restarts: a warm start, then a perturbation
  long total_evaluations = 0;
};

/// Random strategy with every angle uniform in [0, 4 pi).
QuantumStrategy random_strategy(int players, std::uint64_t seed);

/// Best of cfg.restarts random starts plus any warm starts. Restart r is
/// seeded from (cfg.seed, r). The reported gain is win_probability of the
/// returned strategy.
QuantumOptimum optimize_quantum(const StateVector& psi, const GameEquation& eq, const OptimizerConfig& cfg,
                                std::span<const QuantumStrategy> warm_starts = {});

} // namespace chsh
