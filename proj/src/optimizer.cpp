#include "chsh/optimizer.hpp"

#include "chsh/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace chsh {

namespace {

void apply_gate(std::vector<Complex>& amps, const Mat2& gate, std::size_t stride) {
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & stride) continue;
    const Complex x0 = amps[i];
    const Complex x1 = amps[i | stride];
    amps[i] = gate.m[0] * x0 + gate.m[1] * x1;
    amps[i | stride] = gate.m[2] * x0 + gate.m[3] * x1;
  }
}

std::vector<Mat2> gates_of(const QuantumStrategy& s) {
  std::vector<Mat2> gates;
  gates.reserve(static_cast<std::size_t>(2 * s.players()));
  for (int i = 0; i < s.players(); ++i) {
    gates.push_back(build_unitary(s.gate(i, 0)));
    gates.push_back(build_unitary(s.gate(i, 1)));
  }
  return gates;
}

} // namespace

void OptimizerConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be positive");
  if (max_evaluations < 1) throw std::invalid_argument("max evaluations must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (perturbations < 0) throw std::invalid_argument("perturbations must be non-negative");
}

Vec3 measurement_direction(const Mat2& gate) {
  // U^dag|0> = (conj(U00), conj(U01)).
  const Complex u0 = std::conj(gate(0, 0));
  const Complex u1 = std::conj(gate(0, 1));
  const Complex cross = std::conj(u0) * u1;
  return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(u0) - std::norm(u1)};
}

UnitaryParams params_for_direction(const Vec3& m) {
  const double z = std::clamp(m[2], -1.0, 1.0);
  const double lambda = std::atan2(m[1], -m[0]);
  return {std::acos(z), 0.0, lambda};
}

WinEvaluator::WinEvaluator(const StateVector& psi, const GameEquation& eq)
    : players_(psi.qubits()), psi_(psi), winning_(std::size_t{1} << psi.qubits()) {
  if (eq.arity() != players_) {
    throw std::invalid_argument("equation arity " + std::to_string(eq.arity()) + " does not match " +
                                std::to_string(players_) + "-qubit state");
  }
  for (std::uint32_t q = 0; q < winning_.size(); ++q) winning_[q] = eq.winning_answers(q);
}

void WinEvaluator::descend(std::span<const Mat2> gates, int level, std::uint32_t question,
                           std::vector<std::vector<Complex>>& bufs, double& total) const {
  if (level == players_) {
    const auto& amps = bufs[static_cast<std::size_t>(level)];
    const std::uint32_t mask = winning_[question];
    for (std::size_t a = 0; a < amps.size(); ++a) {
      if ((mask >> a) & 1u) total += std::norm(amps[a]);
    }
    return;
  }
  const std::size_t stride = std::size_t{1} << (players_ - 1 - level);
  for (int q = 0; q < 2; ++q) {
    auto& next = bufs[static_cast<std::size_t>(level + 1)];
    next = bufs[static_cast<std::size_t>(level)];
    apply_gate(next, gates[static_cast<std::size_t>(2 * level + q)], stride);
    descend(gates, level + 1, (question << 1) | static_cast<std::uint32_t>(q), bufs, total);
  }
}

double WinEvaluator::value(std::span<const Mat2> gates) const {
  if (gates.size() != static_cast<std::size_t>(2 * players_)) throw std::invalid_argument("expected 2n gates");
  std::vector<std::vector<Complex>> bufs(static_cast<std::size_t>(players_ + 1));
  bufs[0].assign(psi_.amplitudes().begin(), psi_.amplitudes().end());
  double total = 0.0;
  descend(gates, 0, 0, bufs, total);
  return total / static_cast<double>(winning_.size());
}

std::array<Vec3, 2> WinEvaluator::response_vectors(std::span<const Mat2> gates, int player) const {
  if (gates.size() != static_cast<std::size_t>(2 * players_)) throw std::invalid_argument("expected 2n gates");
  if (player < 0 || player >= players_) throw std::invalid_argument("player out of range");
  const std::size_t stride = std::size_t{1} << (players_ - 1 - player);
  const std::uint32_t questions = static_cast<std::uint32_t>(winning_.size());

  std::array<Vec3, 2> v{};
  std::vector<Complex> phi;
  for (std::uint32_t q = 0; q < questions; ++q) {
    if (q & stride) continue;
    phi.assign(psi_.amplitudes().begin(), psi_.amplitudes().end());
    for (int j = 0; j < players_; ++j) {
      if (j == player) continue;
      const int bit = static_cast<int>((q >> (players_ - 1 - j)) & 1u);
      apply_gate(phi, gates[static_cast<std::size_t>(2 * j + bit)], std::size_t{1} << (players_ - 1 - j));
    }
    const std::uint32_t mask[2] = {winning_[q], winning_[q | static_cast<std::uint32_t>(stride)]};
    for (std::size_t idx0 = 0; idx0 < phi.size(); ++idx0) {
      if (idx0 & stride) continue;
      const std::size_t idx1 = idx0 | stride;
      const Complex cross = std::conj(phi[idx0]) * phi[idx1];
      const Vec3 r = {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(phi[idx0]) - std::norm(phi[idx1])};
      for (int b = 0; b < 2; ++b) {
        const int w = static_cast<int>((mask[b] >> idx0) & 1u) - static_cast<int>((mask[b] >> idx1) & 1u);
        if (w == 0) continue;
        for (int k = 0; k < 3; ++k) v[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)] += w * r[static_cast<std::size_t>(k)];
      }
    }
  }
  return v;
}

AscentResult local_ascent(const WinEvaluator& evaluator, const StateVector& psi, const GameEquation& eq,
                          const QuantumStrategy& start, const OptimizerConfig& cfg) {
  const int n = evaluator.players();
  if (start.players() != n) throw std::invalid_argument("start strategy has wrong player count");

  AscentResult out;
  out.strategy = start;
  std::vector<Mat2> gates = gates_of(start);
  double current = evaluator.value(gates);
  out.evaluations = 1;

  while (out.evaluations + n + 1 <= cfg.max_evaluations) {
    for (int i = 0; i < n; ++i) {
      const auto v = evaluator.response_vectors(gates, i);
      for (int b = 0; b < 2; ++b) {
        const Vec3& d = v[static_cast<std::size_t>(b)];
        const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        // A vanishing response vector means every direction is equally good.
        if (len < 1e-13) continue;
        const UnitaryParams p = params_for_direction({d[0] / len, d[1] / len, d[2] / len});
        out.strategy.gate(i, b) = p;
        gates[static_cast<std::size_t>(2 * i + b)] = build_unitary(p);
      }
      ++out.evaluations;
    }
    const double next = evaluator.value(gates);
    ++out.evaluations;
    ++out.cycles;
    const double gained = next - current;
    current = std::max(current, next);
    if (gained < cfg.tolerance) break;
  }
  out.gain = win_probability(psi, out.strategy, eq);
  return out;
}

QuantumStrategy random_strategy(int players, std::uint64_t seed) {
  Rng rng(seed);
  QuantumStrategy s(players);
  constexpr double span = 4.0 * std::numbers::pi;
  for (int i = 0; i < players; ++i) {
    for (int q = 0; q < 2; ++q) {
      UnitaryParams& p = s.gate(i, q);
      p.theta = rng.uniform(0.0, span);
      p.phi = rng.uniform(0.0, span);
      p.lambda = rng.uniform(0.0, span);
    }
  }
  return s;
}

QuantumOptimum optimize_quantum(const StateVector& psi, const GameEquation& eq, const OptimizerConfig& cfg,
                                std::span<const QuantumStrategy> warm_starts) {
  cfg.validate();
  const WinEvaluator evaluator(psi, eq);
  const int n = evaluator.players();

  QuantumOptimum best;
  best.gain = -1.0;
  auto consider = [&](const QuantumStrategy& start, int index) {
    const AscentResult r = local_ascent(evaluator, psi, eq, start, cfg);
    best.total_evaluations += r.evaluations;
    if (r.gain > best.gain) {
      best.gain = r.gain;
      best.strategy = r.strategy;
      best.best_restart = index;
    }
  };

  for (int r = 0; r < cfg.restarts; ++r) {
    consider(random_strategy(n, derive_seed(cfg.seed, {static_cast<std::uint64_t>(r)})), r);
  }
  for (std::size_t w = 0; w < warm_starts.size(); ++w) {
    consider(warm_starts[w], cfg.restarts + static_cast<int>(w));
  }

  // Perturbation phase: re-randomize a random subset of at least two
  // players of the incumbent and re-ascend. Escapes equilibria where no
  // single player can improve.
  const int base = cfg.restarts + static_cast<int>(warm_starts.size());
  for (int k = 0; k < cfg.perturbations; ++k) {
    Rng rng(derive_seed(cfg.seed, {0x6b1c6ull, static_cast<std::uint64_t>(k)}));
    QuantumStrategy start = best.strategy;
    const QuantumStrategy fresh = random_strategy(n, rng.next());
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[static_cast<std::size_t>(i)], order[rng.below(static_cast<std::uint64_t>(i + 1))]);
    }
    const int count = std::min(n, 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, n - 1)))));
    for (int j = 0; j < count; ++j) {
      const int i = order[static_cast<std::size_t>(j)];
      for (int q = 0; q < 2; ++q) start.gate(i, q) = fresh.gate(i, q);
    }
    consider(start, base + k);
  }

  for (int i = 0; i < n; ++i) {
    for (int q = 0; q < 2; ++q) best.strategy.gate(i, q) = reduced_angles(best.strategy.gate(i, q));
  }
  best.gain = win_probability(psi, best.strategy, eq);
  return best;
}

} // namespace chsh
