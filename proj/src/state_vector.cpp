#include "chsh/state_vector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chsh {

Mat2 Mat2::adjoint() const {
  return Mat2{{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
  }
  return out;
}

double max_abs_diff(const Mat2& a, const Mat2& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

StateVector::StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  const std::size_t dim = amps_.size();
  if (dim < 2 || dim > (std::size_t{1} << 16) || !std::has_single_bit(dim)) {
    throw std::invalid_argument("state dimension must be a power of two in [2, 65536], got " +
                                std::to_string(dim));
  }
  qubits_ = std::countr_zero(dim);
  const double n = norm();
  if (!(n > 1e-300) || !std::isfinite(n)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite state vector");
  }
  for (auto& a : amps_) a /= n;
}

StateVector StateVector::basis(int qubits, std::uint32_t index) {
  if (qubits < 1 || qubits > 16) throw std::invalid_argument("qubit count out of range");
  std::vector<Complex> amps(std::size_t{1} << qubits);
  if (index >= amps.size()) throw std::invalid_argument("basis index out of range");
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

Complex StateVector::inner(const StateVector& other) const {
  if (other.dimension() != dimension()) throw std::invalid_argument("inner product of mismatched states");
  Complex s = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

StateVector StateVector::permute_qubits(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != qubits_) throw std::invalid_argument("permutation length mismatch");
  std::vector<int> seen(perm.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= qubits_ || seen[static_cast<std::size_t>(p)]++) {
      throw std::invalid_argument("not a permutation");
    }
  }
  std::vector<Complex> out(amps_.size());
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    std::size_t src = 0;
    for (int i = 0; i < qubits_; ++i) {
      const std::size_t bit = (idx >> (qubits_ - 1 - i)) & 1u;
      src |= bit << (qubits_ - 1 - perm[static_cast<std::size_t>(i)]);
    }
    out[idx] = amps_[src];
  }
  return StateVector(std::move(out));
}

void StateVector::apply(const Mat2& gate, int qubit) {
  if (qubit < 0 || qubit >= qubits_) throw std::invalid_argument("qubit index out of range");
  const std::size_t stride = std::size_t{1} << (qubits_ - 1 - qubit);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & stride) continue;
    const Complex x0 = amps_[i];
    const Complex x1 = amps_[i | stride];
    amps_[i] = gate.m[0] * x0 + gate.m[1] * x1;
    amps_[i | stride] = gate.m[2] * x0 + gate.m[3] * x1;
  }
}

Mat2 build_unitary(const UnitaryParams& p) {
  const double c = std::cos(p.theta / 2.0);
  const double s = std::sin(p.theta / 2.0);
  const Complex e_phi = std::polar(1.0, p.phi);
  const Complex e_lambda = std::polar(1.0, p.lambda);
  return Mat2{{Complex(c, 0.0), -e_lambda * s, e_phi * s, e_phi * e_lambda * c}};
}

UnitaryParams reduced_angles(const UnitaryParams& p) {
  constexpr double period = 4.0 * std::numbers::pi;
  auto wrap = [](double a) {
    double r = std::fmod(a, period);
    if (r < 0.0) r += period;
    return r >= period ? 0.0 : r;
  };
  return {wrap(p.theta), wrap(p.phi), wrap(p.lambda)};
}

QuantumStrategy::QuantumStrategy(int players) {
  if (players < 1) throw std::invalid_argument("strategy needs at least one player");
  params_.resize(static_cast<std::size_t>(players));
}

StateVector apply_strategy(const StateVector& psi, const QuantumStrategy& s, std::uint32_t question) {
  const int n = psi.qubits();
  if (s.players() != n) {
    throw std::invalid_argument("strategy has " + std::to_string(s.players()) + " players but state has " +
                                std::to_string(n) + " qubits");
  }
  if (question >= (1u << n)) throw std::invalid_argument("question index out of range");
  StateVector out = psi;
  for (int i = 0; i < n; ++i) {
    const int q = (question >> (n - 1 - i)) & 1;
    out.apply(build_unitary(s.gate(i, q)), i);
  }
  return out;
}

std::vector<double> outcome_distribution(const StateVector& psi) {
  std::vector<double> p(psi.dimension());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(psi[i]);
  return p;
}

std::vector<double> win_probability_by_question(const StateVector& psi, const QuantumStrategy& s,
                                                const GameEquation& eq) {
  const int n = psi.qubits();
  if (eq.arity() != n) {
    throw std::invalid_argument("equation arity " + std::to_string(eq.arity()) + " does not match " +
                                std::to_string(n) + "-qubit state");
  }
  std::vector<double> out(std::size_t{1} << n);
  for (std::uint32_t q = 0; q < out.size(); ++q) {
    const auto dist = outcome_distribution(apply_strategy(psi, s, q));
    const std::uint32_t winning = eq.winning_answers(q);
    double p = 0.0;
    for (std::uint32_t a = 0; a < dist.size(); ++a) {
      if ((winning >> a) & 1u) p += dist[a];
    }
    out[q] = p;
  }
  return out;
}

double win_probability(const StateVector& psi, const QuantumStrategy& s, const GameEquation& eq) {
  const auto per_question = win_probability_by_question(psi, s, eq);
  double total = 0.0;
  for (double p : per_question) total += p;
  return total / static_cast<double>(per_question.size());
}

} // namespace chsh
