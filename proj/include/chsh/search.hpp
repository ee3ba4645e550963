// Per-equation evaluation (classical optimum, quantum optimum, gap), batch
// search over a function list for a fixed answer function g, and the
// aggregate game-score metrics.
#pragma once

#include "chsh/classical.hpp"
#include "chsh/optimizer.hpp"
#include "chsh/state_vector.hpp"
#include "chsh/truth_table.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chsh {

/// Gaps must exceed this, strictly, to count as a quantum advantage.
inline constexpr double kAdvantageThreshold = 0.01;

struct GameResult {
  GameEquation equation;
  double classical = 0.0;
  ClassicalStrategy classical_strategy{2, 0}; // smallest optimal encoding
  std::size_t classical_optima = 0;
  double quantum = 0.0;
  QuantumStrategy strategy;
  double gap = 0.0;
  std::string state;
  OptimizerConfig config;
  double elapsed_ms = 0.0;
};

/// Classical optimum, quantum optimum on `psi`, and their gap.
GameResult evaluate_game(const StateVector& psi, const std::string& state_descriptor, const GameEquation& eq,
                         const OptimizerConfig& cfg);

/// Seed for the task evaluating `f`: a function of the master seed and the
/// table of f only.
std::uint64_t task_seed(std::uint64_t master, const TruthTable& f);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// One result per f, in input order; identical for any worker count.
std::vector<GameResult> search_space(const TruthTable& g, const StateVector& psi, const std::string& state_descriptor,
                                     const OptimizerConfig& cfg, const std::vector<TruthTable>& functions,
                                     int workers, const ProgressFn& progress = {});

/// Fraction of results whose gap exceeds kAdvantageThreshold. Throws
/// std::invalid_argument on an empty list.
double game_score(const std::vector<GameResult>& results);

/// Mean gap over the results counted by game_score. Throws
/// std::domain_error when none qualify.
double average_gap(const std::vector<GameResult>& results);

struct SearchSummary {
  std::size_t count = 0;
  std::size_t qualifying = 0;
  double game_score = 0.0;
  std::optional<double> average_gap;
  double max_quantum = 0.0;
  std::vector<std::size_t> top_gaps; // indices into the results, best first
};

SearchSummary summarize(const std::vector<GameResult>& results, std::size_t top = 10);

/// Roughly `count` functions drawn proportionally from strata of equal
/// Hamming weight, returned in input order. Returns everything when
/// count >= functions.size().
std::vector<TruthTable> stratified_subsample(const std::vector<TruthTable>& functions, std::size_t count,
                                             std::uint64_t seed);

nlohmann::json strategy_to_json(const QuantumStrategy& s);
QuantumStrategy strategy_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GameResult& r, bool include_timing = true);
GameResult game_result_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SearchSummary& s, const std::vector<GameResult>& results);

/// One GameResult per line followed by a {"summary": ...} line.
void write_results_jsonl(std::ostream& out, const std::vector<GameResult>& results, bool include_timing);

struct ResultsFile {
  std::vector<GameResult> results;
  std::optional<nlohmann::json> summary;
};
ResultsFile read_results_jsonl(std::istream& in);

/// One `n:HEX` table per line; blank lines and '#' comments are skipped.
std::vector<TruthTable> read_function_list(std::istream& in);
void write_function_list(std::ostream& out, const std::vector<TruthTable>& functions);

} // namespace chsh
