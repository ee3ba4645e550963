#include "chsh/search.hpp"

#include "chsh/parallel.hpp"
#include "chsh/seeding.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace chsh {

using nlohmann::json;

GameResult evaluate_game(const StateVector& psi, const std::string& state_descriptor, const GameEquation& eq,
                         const OptimizerConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  GameResult r;
  r.equation = eq;
  r.state = state_descriptor;
  r.config = cfg;

  const ClassicalOptimum classical = classical_best(eq);
  r.classical = classical.gain;
  r.classical_strategy = classical.maximizers.front();
  r.classical_optima = classical.maximizers.size();

  const QuantumOptimum quantum = optimize_quantum(psi, eq, cfg);
  r.quantum = quantum.gain;
  r.strategy = quantum.strategy;
  r.gap = r.quantum - r.classical;
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::uint64_t task_seed(std::uint64_t master, const TruthTable& f) {
  return derive_seed(master, {static_cast<std::uint64_t>(f.arity()), f.bits()});
}

std::vector<GameResult> search_space(const TruthTable& g, const StateVector& psi, const std::string& state_descriptor,
                                     const OptimizerConfig& cfg, const std::vector<TruthTable>& functions,
                                     int workers, const ProgressFn& progress) {
  cfg.validate();
  if (g.arity() != psi.qubits()) {
    throw std::invalid_argument("g has arity " + std::to_string(g.arity()) + " but the state has " +
                                std::to_string(psi.qubits()) + " qubits");
  }
  for (const auto& f : functions) {
    if (f.arity() != g.arity()) throw std::invalid_argument("function list arity does not match g");
  }

  std::vector<GameResult> results(functions.size());
  std::mutex progress_mutex;
  std::size_t done = 0;
  parallel_for(functions.size(), workers, [&](std::size_t i) {
    OptimizerConfig task_cfg = cfg;
    task_cfg.seed = task_seed(cfg.seed, functions[i]);
    results[i] = evaluate_game(psi, state_descriptor, GameEquation(functions[i], g), task_cfg);
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(++done, functions.size());
    }
  });
  return results;
}

double game_score(const std::vector<GameResult>& results) {
  if (results.empty()) throw std::invalid_argument("game score of an empty result list");
  const auto qualifying = std::count_if(results.begin(), results.end(),
                                        [](const GameResult& r) { return r.gap > kAdvantageThreshold; });
  return static_cast<double>(qualifying) / static_cast<double>(results.size());
}

double average_gap(const std::vector<GameResult>& results) {
  if (results.empty()) throw std::invalid_argument("average gap of an empty result list");
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : results) {
    if (r.gap > kAdvantageThreshold) {
      sum += r.gap;
      ++n;
    }
  }
  if (n == 0) throw std::domain_error("no result has a gap above the advantage threshold");
  return sum / static_cast<double>(n);
}

SearchSummary summarize(const std::vector<GameResult>& results, std::size_t top) {
  SearchSummary s;
  s.count = results.size();
  if (results.empty()) return s;
  s.game_score = game_score(results);
  s.qualifying = static_cast<std::size_t>(std::llround(s.game_score * static_cast<double>(s.count)));
  if (s.qualifying > 0) s.average_gap = average_gap(results);
  for (const auto& r : results) s.max_quantum = std::max(s.max_quantum, r.quantum);

  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return results[a].gap > results[b].gap; });
  order.resize(std::min(top, order.size()));
  s.top_gaps = std::move(order);
  return s;
}

std::vector<TruthTable> stratified_subsample(const std::vector<TruthTable>& functions, std::size_t count,
                                             std::uint64_t seed) {
  if (count >= functions.size()) return functions;
  std::map<int, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < functions.size(); ++i) strata[std::popcount(functions[i].bits())].push_back(i);

  // Largest-remainder allocation of `count` across strata.
  struct Share {
    int weight;
    std::size_t take;
    double remainder;
  };
  std::vector<Share> shares;
  std::size_t allocated = 0;
  for (const auto& [weight, members] : strata) {
    const double exact = static_cast<double>(count) * static_cast<double>(members.size()) /
                         static_cast<double>(functions.size());
    const auto take = static_cast<std::size_t>(exact);
    shares.push_back({weight, take, exact - static_cast<double>(take)});
    allocated += take;
  }
  std::vector<std::size_t> by_remainder(shares.size());
  std::iota(by_remainder.begin(), by_remainder.end(), std::size_t{0});
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t a, std::size_t b) { return shares[a].remainder > shares[b].remainder; });
  for (std::size_t k = 0; allocated < count && k < by_remainder.size(); ++k) {
    auto& share = shares[by_remainder[k]];
    if (share.take < strata[share.weight].size()) {
      ++share.take;
      ++allocated;
    }
  }

  std::vector<std::size_t> picked;
  for (const auto& share : shares) {
    auto members = strata[share.weight];
    Rng rng(derive_seed(seed, {0x5742a7aull, static_cast<std::uint64_t>(share.weight)}));
    // Partial Fisher-Yates.
    for (std::size_t k = 0; k < share.take; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng.below(members.size() - k));
      std::swap(members[k], members[j]);
      picked.push_back(members[k]);
    }
  }
  std::sort(picked.begin(), picked.end());
  std::vector<TruthTable> out;
  out.reserve(picked.size());
  for (std::size_t i : picked) out.push_back(functions[i]);
  return out;
}

json strategy_to_json(const QuantumStrategy& s) {
  json angles = json::array();
  for (int i = 0; i < s.players(); ++i) {
    json player = json::array();
    for (int q = 0; q < 2; ++q) {
      const auto& p = s.gate(i, q);
      player.push_back({p.theta, p.phi, p.lambda});
    }
    angles.push_back(std::move(player));
  }
  return json{{"angles", std::move(angles)}};
}

QuantumStrategy strategy_from_json(const json& j) {
  const json& angles = j.at("angles");
  QuantumStrategy s(static_cast<int>(angles.size()));
  for (int i = 0; i < s.players(); ++i) {
    const json& player = angles.at(static_cast<std::size_t>(i));
    if (player.size() != 2) throw std::invalid_argument("each player needs two gates");
    for (int q = 0; q < 2; ++q) {
      const json& g = player.at(static_cast<std::size_t>(q));
      if (g.size() != 3) throw std::invalid_argument("each gate needs three angles");
      s.gate(i, q) = {g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<double>()};
    }
  }
  return s;
}

json to_json(const GameResult& r, bool include_timing) {
  json j{
      {"f", r.equation.f.to_string()},
      {"g", r.equation.g.to_string()},
      {"classical", r.classical},
      {"classical_strategy", r.classical_strategy.encoding()},
      {"classical_optima", r.classical_optima},
      {"quantum", r.quantum},
      {"gap", r.gap},
      {"strategy", strategy_to_json(r.strategy)},
      {"state", r.state},
      {"seed", r.config.seed},
      {"optimizer",
       {{"restarts", r.config.restarts},
        {"perturbations", r.config.perturbations},
        {"max_evaluations", r.config.max_evaluations},
        {"tolerance", r.config.tolerance}}},
  };
  if (include_timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

GameResult game_result_from_json(const json& j) {
  GameResult r;
  r.equation = GameEquation(TruthTable::parse(j.at("f").get<std::string>()),
                            TruthTable::parse(j.at("g").get<std::string>()));
  r.classical = j.at("classical").get<double>();
  r.classical_strategy = ClassicalStrategy(r.equation.arity(), j.value("classical_strategy", 0u));
  r.classical_optima = j.value("classical_optima", std::size_t{0});
  r.quantum = j.at("quantum").get<double>();
  r.strategy = strategy_from_json(j.at("strategy"));
  r.gap = j.at("gap").get<double>();
  r.state = j.at("state").get<std::string>();
  r.config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    r.config.restarts = o.value("restarts", r.config.restarts);
    r.config.perturbations = o.value("perturbations", r.config.perturbations);
    r.config.max_evaluations = o.value("max_evaluations", r.config.max_evaluations);
    r.config.tolerance = o.value("tolerance", r.config.tolerance);
  }
  r.elapsed_ms = j.value("elapsed_ms", 0.0);
  return r;
}

json to_json(const SearchSummary& s, const std::vector<GameResult>& results) {
  json top = json::array();
  for (std::size_t i : s.top_gaps) {
    const auto& r = results.at(i);
    top.push_back({{"f", r.equation.f.to_string()}, {"classical", r.classical}, {"quantum", r.quantum}, {"gap", r.gap}});
  }
  json j{
      {"count", s.count},
      {"qualifying", s.qualifying},
      {"game_score", s.game_score},
      {"average_gap", s.average_gap ? json(*s.average_gap) : json(nullptr)},
      {"max_quantum", s.max_quantum},
      {"top_gaps", std::move(top)},
  };
  if (!s.top_gaps.empty()) j["argmax_gap"] = j["top_gaps"][0];
  return j;
}

void write_results_jsonl(std::ostream& out, const std::vector<GameResult>& results, bool include_timing) {
  for (const auto& r : results) out << to_json(r, include_timing).dump() << '\n';
  out << json{{"summary", to_json(summarize(results), results)}}.dump() << '\n';
}

ResultsFile read_results_jsonl(std::istream& in) {
  ResultsFile file;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (j.contains("summary")) {
      file.summary = j["summary"];
    } else {
      file.results.push_back(game_result_from_json(j));
    }
  }
  return file;
}

std::vector<TruthTable> read_function_list(std::istream& in) {
  std::vector<TruthTable> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.push_back(TruthTable::parse(std::string_view(line).substr(b, e - b + 1)));
  }
  return out;
}

void write_function_list(std::ostream& out, const std::vector<TruthTable>& functions) {
  for (const auto& t : functions) out << t.to_string() << '\n';
}

} // namespace chsh
