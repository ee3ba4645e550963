// Quantum-gain landscapes over the parametric four-qubit families, and
// best/average gains over random parameter draws.
#pragma once

#include "chsh/optimizer.hpp"
#include "chsh/state_library.hpp"
#include "chsh/truth_table.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chsh {

struct SweepAxis {
  std::string param;
  double min = -9.0;
  double max = 9.0;
  int steps = 37;

  double value(int k) const;
};

/// `param = scale * source`, evaluated after the axes are set.
struct ParamTie {
  std::string source;
  double scale = 1.0;
};

struct SweepSpec {
  FamilyId family = FamilyId::L_abc2;
  std::vector<SweepAxis> axes; // axes[0] is the warm-start chain direction
  std::map<std::string, Complex> fixed;
  std::map<std::string, ParamTie> ties;
  GameEquation equation;
  std::string f_text; // source text, kept for the sidecar
  std::string g_text;
  OptimizerConfig optimizer;
  bool warm_start = true;
  std::string output; // CSV path; empty lets the caller choose

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;

  /// Fields: family, axes [{param,min,max,steps}], fixed {name: "re+imi"},
  /// ties {name: "a" | "-a" | {"source":..,"scale":..}}, f, g, optimizer
  /// {restarts,perturbations,max_evaluations,tolerance,seed}, warm_start, output.
  static SweepSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  /// Family parameters at the given axis values.
  FamilyParams params_at(const std::vector<double>& coords) const;
};

struct SweepPoint {
  std::vector<double> coords; // one per axis
  bool valid = false;
  double gain = 0.0;
  QuantumStrategy strategy;
  std::string error;
};

struct SweepResult {
  SweepSpec spec;
  /// Row-major: the last axis is the outer loop, axes[0] the inner one.
  std::vector<SweepPoint> points;
};

/// Evaluates every grid point. Point k is optimized with seed
/// derive(spec seed, k); along axes[0] the previous valid point's strategy
/// is added as a warm start. Rows of a 2D grid run in parallel.
SweepResult run_sweep(const SweepSpec& spec, int workers);

/// Header: axis names, gain, valid, theta_i_q, phi_i_q, lambda_i_q.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

struct FamilyReport {
  FamilyId family{};
  double best = 0.0;
  std::optional<double> average; // unset for parameter-free families
  std::vector<double> gains;
  std::vector<FamilyParams> params;
};

/// Parametric families: `draws` random parameter sets, each optimized.
/// Parameter-free families: one evaluation.
FamilyReport family_report(FamilyId id, const GameEquation& eq, int draws, const OptimizerConfig& cfg, int workers);

} // namespace chsh
