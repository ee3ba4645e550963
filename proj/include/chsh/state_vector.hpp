// Dense n-qubit state vectors, the three-angle single-qubit unitary, and
// evaluation of a quantum strategy against a game equation.
//
// Basis index is big-endian in qubit order: qubit 0 (player 1) is the most
// significant bit, matching the truth-table row convention.
#pragma once

#include "chsh/truth_table.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace chsh {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix.
struct Mat2 {
  std::array<Complex, 4> m{};

  Complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
  const Complex& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

  static Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }
  Mat2 adjoint() const;
  friend Mat2 operator*(const Mat2& a, const Mat2& b);
};

double max_abs_diff(const Mat2& a, const Mat2& b);

class StateVector {
public:
  StateVector() = default;

  /// Normalizes the amplitudes. Throws std::invalid_argument if the length
  /// is not a power of two in [2, 2^16] or the vector is (numerically) zero.
  explicit StateVector(std::vector<Complex> amplitudes);

  /// Computational basis state |index>.
  static StateVector basis(int qubits, std::uint32_t index);

  int qubits() const { return qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  Complex inner(const StateVector& other) const; // <this|other>

  /// Relabels qubits: qubit i of the result is qubit perm[i] of this state.
  StateVector permute_qubits(std::span<const int> perm) const;

  /// In-place single-qubit gate on `qubit`; no normalization.
  void apply(const Mat2& gate, int qubit);

private:
  int qubits_ = 0;
  std::vector<Complex> amps_;
};

/// Angles of the single-qubit gate
///   [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]
/// with t = theta, p = phi, l = lambda.
struct UnitaryParams {
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;

  friend bool operator==(const UnitaryParams&, const UnitaryParams&) = default;
};

Mat2 build_unitary(const UnitaryParams& p);

/// Angles reduced into [0, 4*pi).
UnitaryParams reduced_angles(const UnitaryParams& p);

/// Gate (i, q) is applied by player i on question bit q.
class QuantumStrategy {
public:
  QuantumStrategy() = default;
  explicit QuantumStrategy(int players);

  int players() const { return static_cast<int>(params_.size()); }
  UnitaryParams& gate(int player, int question) {
    return params_[static_cast<std::size_t>(player)][static_cast<std::size_t>(question)];
  }
  const UnitaryParams& gate(int player, int question) const {
    return params_[static_cast<std::size_t>(player)][static_cast<std::size_t>(question)];
  }

  friend bool operator==(const QuantumStrategy&, const QuantumStrategy&) = default;

private:
  std::vector<std::array<UnitaryParams, 2>> params_;
};

/// U_{1,q_1} (x) ... (x) U_{n,q_n} |psi>, applied qubit by qubit.
/// `question` is the big-endian question index. Throws on size mismatch.
StateVector apply_strategy(const StateVector& psi, const QuantumStrategy& s, std::uint32_t question);

/// |amplitude|^2 for every basis state.
std::vector<double> outcome_distribution(const StateVector& psi);

/// Probability of winning with questions drawn uniformly.
double win_probability(const StateVector& psi, const QuantumStrategy& s, const GameEquation& eq);

/// Per-question winning probabilities (index = question).
std::vector<double> win_probability_by_question(const StateVector& psi, const QuantumStrategy& s,
                                                const GameEquation& eq);

} // namespace chsh
