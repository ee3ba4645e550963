#include "chsh/cli.hpp"

#include "chsh/expression.hpp"
#include "chsh/parallel.hpp"
#include "chsh/run_store.hpp"
#include "chsh/search.hpp"
#include "chsh/seeding.hpp"
#include "chsh/state_library.hpp"
#include "chsh/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace chsh {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Bad input the user can fix on the command line (exit code 2).
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Reads CLI options from a JSON object. Top-level keys are global options;
/// a key naming a subcommand holds an object with that subcommand's options.
class JsonConfig : public CLI::Config {
public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        flatten(value, next, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

struct GlobalOptions {
  std::uint64_t seed = kDefaultSeed;
  int workers = default_workers();
  std::string output_dir = "runs";
};

struct OptimizerOptions {
  int restarts = OptimizerConfig{}.restarts;
  int perturbations = OptimizerConfig{}.perturbations;
  int max_evaluations = OptimizerConfig{}.max_evaluations;
  double tolerance = OptimizerConfig{}.tolerance;

  void attach(CLI::App* app) {
    app->add_option("--restarts", restarts, "Random restarts per optimization")->capture_default_str();
    app->add_option("--perturbations", perturbations, "Re-ascents from the best strategy with some players re-randomized")
        ->capture_default_str();
    app->add_option("--max-evals", max_evaluations, "Evaluation budget per restart")->capture_default_str();
    app->add_option("--tolerance", tolerance, "Stop a restart when a cycle gains less than this")
        ->capture_default_str();
  }

  OptimizerConfig config(std::uint64_t seed) const {
    OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.perturbations = perturbations;
    cfg.max_evaluations = max_evaluations;
    cfg.tolerance = tolerance;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }

  json to_json() const {
    return {{"restarts", restarts},
            {"perturbations", perturbations},
            {"max_evaluations", max_evaluations}, {"tolerance", tolerance}};
  }
};

TruthTable parse_side(const std::string& text, const std::vector<std::string>& alphabet, int arity,
                      const char* which) {
  if (text.find(':') != std::string::npos) {
    TruthTable t;
    try {
      t = TruthTable::parse(text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string(which) + ": " + e.what());
    }
    if (t.arity() != arity) {
      throw UsageError(std::string(which) + " has arity " + std::to_string(t.arity()) + " but the state has " +
                       std::to_string(arity) + " qubits");
    }
    return t;
  }
  try {
    return to_truth_table(parse_expression(text, alphabet), arity);
  } catch (const ParseError& e) {
    throw UsageError(std::string(which) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(which) + ": " + e.what());
  }
}

StateSpec resolve_state(const std::string& literal) {
  try {
    return parse_state_literal(literal);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--state: ") + e.what());
  }
}

void check_arity(int qubits) {
  if (qubits < kMinArity || qubits > kMaxArity) {
    throw UsageError("games need a 2- to 4-qubit state, got " + std::to_string(qubits) + " qubits");
  }
}

std::vector<TruthTable> load_functions(const std::string& path) {
  if (path.empty()) throw UsageError("--functions is required");
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open functions file '" + path + "'");
  try {
    return read_function_list(in);
  } catch (const std::invalid_argument& e) {
    throw UsageError("functions file '" + path + "': " + e.what());
  }
}

void write_text_atomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
  }
  fs::rename(tmp, path);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

struct Progress {
  std::ostream& err;
  ProgressFn fn() {
    return [this](std::size_t done, std::size_t total) {
      const std::size_t step = std::max<std::size_t>(1, total / 20);
      if (done % step == 0 || done == total) err << "  " << done << "/" << total << "\n" << std::flush;
    };
  }
};

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Search engine for n-player CHSH-type games f(questions) = g(answers)", "chsh-games"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values (CLI flags take precedence)");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CHSH_VERSION));

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Master seed")->capture_default_str();
  app.add_option("--workers", global.workers, "Worker threads (does not affect results)")->capture_default_str();
  app.add_option("--output-dir", global.output_dir, "Root directory of the run store")->capture_default_str();

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Canonical reduction of the function space");
  int arity = 4;
  bool all_relevant = false;
  bool no_output_flip = false;
  std::string reduce_output;
  reduce->add_option("--arity", arity, "Number of variables (2-4)")->capture_default_str();
  reduce->add_flag("--all-relevant", all_relevant, "Keep only functions depending on every variable");
  reduce->add_flag("--no-output-flip", no_output_flip, "Do not identify f with its complement");
  reduce->add_option("--output", reduce_output, "Function list path (default: inside the run directory)");

  // eval
  auto* eval = app.add_subcommand("eval", "Classical and/or quantum value of one game");
  std::string eval_state = "ghz4", eval_f, eval_g, mode = "both";
  OptimizerOptions eval_opt;
  eval->add_option("--state", eval_state, "State literal")->capture_default_str();
  eval->add_option("--f", eval_f, "Question-side expression or n:HEX table");
  eval->add_option("--g", eval_g, "Answer-side expression or n:HEX table (default: parity)");
  eval->add_option("--mode", mode, "classical, quantum or both")
      ->check(CLI::IsMember({"classical", "quantum", "both"}))
      ->capture_default_str();
  eval_opt.attach(eval);

  // search and score share their inputs
  struct BatchOptions {
    std::string state = "ghz4";
    std::string g;
    std::string functions;
    std::string output;
    std::size_t subsample = 0;
    bool no_timing = false;
    int trials = 1;
    OptimizerOptions opt;
  };
  BatchOptions search_opts, score_opts;
  auto attach_batch = [](CLI::App* cmd, BatchOptions& o) {
    cmd->add_option("--state", o.state, "State literal")->capture_default_str();
    cmd->add_option("--g", o.g, "Answer-side expression or n:HEX table (default: parity)");
    cmd->add_option("--functions", o.functions, "Function list from `reduce`");
    cmd->add_option("--output", o.output, "JSON-lines results path (default: inside the run directory)");
    cmd->add_option("--subsample", o.subsample, "Evaluate a stratified subsample of this size (0 = all)")
        ->capture_default_str();
    cmd->add_flag("--no-timing", o.no_timing, "Omit elapsed_ms so outputs are byte-reproducible");
    o.opt.attach(cmd);
  };
  auto* search = app.add_subcommand("search", "Evaluate every function of a list against one g");
  attach_batch(search, search_opts);
  auto* score = app.add_subcommand("score", "Game score and average gap of a state");
  attach_batch(score, score_opts);
  score->add_option("--trials", score_opts.trials, "Random parameter draws for a bare family name; best is kept")
      ->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Gain landscape over a family's parameters");
  std::string spec_path, sweep_output;
  sweep->add_option("--spec", spec_path, "Sweep spec (JSON)");
  sweep->add_option("--output", sweep_output, "CSV path (overrides the spec)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  RunStore store(global.output_dir);
  auto finish = [&](RunRecord& record) {
    record.wall_clock_ms = elapsed_ms(started);
    store.commit(record);
    err << "run " << record.run_id << " -> " << (store.directory(record) / "run.json").string() << "\n";
  };
  auto run_relative = [&](const RunRecord& record, const std::string& override_path, const char* name) {
    return override_path.empty() ? store.directory(record) / name : fs::path(override_path);
  };

  try {
    if (global.workers < 1) throw UsageError("--workers must be positive");

    if (*reduce) {
      if (arity < kMinArity || arity > kMaxArity) throw UsageError("--arity must be 2, 3 or 4");
      const ReducedSpace space = reduce_function_space(arity, all_relevant, !no_output_flip);
      const json config{{"arity", arity}, {"all_relevant", all_relevant}, {"output_flip", !no_output_flip}};
      RunRecord record = store.begin("reduce", config, global.seed, global.workers);

      const fs::path list_path = run_relative(record, reduce_output, "functions.txt");
      std::ostringstream list;
      write_function_list(list, space.functions);
      write_text_atomically(list_path, list.str());

      const json summary{
          {"arity", arity},
          {"all_relevant", all_relevant},
          {"output_flip", !no_output_flip},
          {"stages",
           {{"full_space", space.counts.full_space},
            {"after_output_flip", space.counts.after_output_flip},
            {"after_negation_dedup", space.counts.after_negation_dedup},
            {"after_relevance", space.counts.after_relevance}}},
          {"functions", space.functions.size()},
          {"output", list_path.string()},
      };
      const fs::path summary_path = store.directory(record) / "summary.json";
      write_text_atomically(summary_path, summary.dump(2) + "\n");
      record.outputs = {list_path.string(), summary_path.string()};
      out << summary.dump(2) << "\n";
      finish(record);
      return kExitOk;
    }

    if (*eval) {
      if (eval_f.empty()) throw UsageError("--f is required");
      const StateSpec state = resolve_state(eval_state);
      const int n = state.state.qubits();
      check_arity(n);
      const GameEquation eq(parse_side(eval_f, question_alphabet(n), n, "--f"),
                            eval_g.empty() ? TruthTable::parity(n) : parse_side(eval_g, answer_alphabet(n), n, "--g"));
      const OptimizerConfig cfg = eval_opt.config(global.seed);
      const json config{{"state", state.descriptor}, {"f", eval_f},          {"g", eval_g.empty() ? "parity" : eval_g},
                        {"mode", mode},              {"optimizer", eval_opt.to_json()}};
      RunRecord record = store.begin("eval", config, global.seed, global.workers);

      json result{{"f", eq.f.to_string()}, {"g", eq.g.to_string()}, {"state", state.descriptor}, {"mode", mode},
                  {"seed", global.seed}};
      const auto t0 = std::chrono::steady_clock::now();
      std::optional<double> classical, quantum;
      if (mode != "quantum") {
        const ClassicalOptimum c = classical_best(eq);
        classical = c.gain;
        result["classical"] = c.gain;
        result["classical_strategy"] = c.maximizers.front().encoding();
        result["classical_optima"] = c.maximizers.size();
      }
      if (mode != "classical") {
        const QuantumOptimum q = optimize_quantum(state.state, eq, cfg);
        quantum = q.gain;
        result["quantum"] = q.gain;
        result["strategy"] = strategy_to_json(q.strategy);
        result["per_question"] = win_probability_by_question(state.state, q.strategy, eq);
        result["optimizer"] = eval_opt.to_json();
      }
      result["gap"] = classical && quantum ? json(*quantum - *classical) : json(nullptr);
      result["elapsed_ms"] = elapsed_ms(t0);

      const fs::path path = store.directory(record) / "result.json";
      write_text_atomically(path, result.dump(2) + "\n");
      record.outputs = {path.string()};
      out << result.dump(2) << "\n";
      finish(record);
      return kExitOk;
    }

    if (*search || *score) {
      BatchOptions& o = *search ? search_opts : score_opts;
      const std::string sub = *search ? "search" : "score";
      std::vector<TruthTable> functions = load_functions(o.functions);
      if (functions.empty()) throw UsageError("functions file '" + o.functions + "' is empty");
      if (o.subsample > 0) functions = stratified_subsample(functions, o.subsample, global.seed);
      if (o.trials < 1) throw UsageError("--trials must be positive");

      // Candidate states: one literal, or random draws of a bare family name.
      std::vector<StateSpec> states;
      if (o.trials > 1) {
        const auto colon = o.state.find(':');
        FamilyId id{};
        try {
          id = parse_family(o.state.substr(0, colon));
        } catch (const std::invalid_argument&) {
          throw UsageError("--trials needs a parametric family as --state");
        }
        if (!family_is_parametric(id)) throw UsageError("--trials needs a parametric family as --state");
        for (int t = 0; t < o.trials; ++t) {
          const FamilyParams p = random_family_params(id, derive_seed(global.seed, {0x7a1a15ull, static_cast<std::uint64_t>(t)}));
          std::string literal = family_name(id);
          const auto names = family_parameter_names(id);
          for (std::size_t k = 0; k < names.size(); ++k) {
            literal += (k == 0 ? ":" : ",") + names[k] + "=" + format_complex(p.values[k]);
          }
          states.push_back(resolve_state(literal));
        }
      } else {
        states.push_back(resolve_state(o.state));
      }
      const int n = states.front().state.qubits();
      check_arity(n);
      const TruthTable g = o.g.empty() ? TruthTable::parity(n) : parse_side(o.g, answer_alphabet(n), n, "--g");
      for (const auto& f : functions) {
        if (f.arity() != n) throw UsageError("functions file has arity " + std::to_string(f.arity()) + " tables");
      }
      const OptimizerConfig cfg = o.opt.config(global.seed);

      const json config{{"state", o.state},         {"g", g.to_string()},         {"functions", o.functions},
                        {"subsample", o.subsample}, {"trials", o.trials},         {"no_timing", o.no_timing},
                        {"optimizer", o.opt.to_json()}};
      RunRecord record = store.begin(sub, config, global.seed, global.workers);

      Progress progress{err};
      json trials = json::array();
      std::vector<GameResult> best_results;
      std::optional<double> best_score;
      std::string best_state;
      for (const auto& state : states) {
        err << sub << ": " << state.descriptor << " on " << functions.size() << " functions, " << global.workers
            << " workers\n";
        auto results = search_space(g, state.state, state.descriptor, cfg, functions, global.workers, progress.fn());
        const SearchSummary s = summarize(results);
        trials.push_back({{"state", state.descriptor},
                          {"game_score", s.game_score},
                          {"average_gap", s.average_gap ? json(*s.average_gap) : json(nullptr)}});
        if (!best_score || s.game_score > *best_score) {
          best_score = s.game_score;
          best_state = state.descriptor;
          best_results = std::move(results);
        }
      }

      const fs::path results_path = run_relative(record, o.output, "results.jsonl");
      std::ostringstream lines;
      write_results_jsonl(lines, best_results, !o.no_timing);
      write_text_atomically(results_path, lines.str());
      record.outputs = {results_path.string()};

      const SearchSummary summary = summarize(best_results);
      json report = to_json(summary, best_results);
      report["state"] = best_state;
      report["g"] = g.to_string();
      report["results"] = results_path.string();
      if (*score) {
        report["trials"] = std::move(trials);
        const fs::path score_path = store.directory(record) / "score.json";
        write_text_atomically(score_path, report.dump(2) + "\n");
        record.outputs.push_back(score_path.string());
      }
      out << report.dump(2) << "\n";
      finish(record);
      return kExitOk;
    }

    if (*sweep) {
      if (spec_path.empty()) throw UsageError("--spec is required");
      std::ifstream in(spec_path);
      if (!in) throw UsageError("cannot open sweep spec '" + spec_path + "'");
      SweepSpec spec;
      try {
        const json j = json::parse(in);
        spec = SweepSpec::from_json(j);
        if (!j.contains("optimizer") || !j["optimizer"].contains("seed")) spec.optimizer.seed = global.seed;
      } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("sweep spec: ") + e.what());
      } catch (const ParseError& e) {
        throw UsageError(std::string("sweep spec: ") + e.what());
      }
      if (!sweep_output.empty()) spec.output = sweep_output;
      spec.validate();

      RunRecord record = store.begin("sweep", spec.to_json(), spec.optimizer.seed, global.workers);
      const fs::path csv_path = run_relative(record, spec.output, "sweep.csv");
      spec.output = csv_path.string();
      err << "sweep: " << family_name(spec.family) << ", " << global.workers << " workers\n";
      const SweepResult result = run_sweep(spec, global.workers);

      std::ostringstream csv;
      write_sweep_csv(csv, result);
      write_text_atomically(csv_path, csv.str());
      const fs::path sidecar = csv_path.string() + ".json";
      std::size_t invalid = 0;
      double best = 0.0;
      for (const auto& p : result.points) {
        if (!p.valid) ++invalid;
        else best = std::max(best, p.gain);
      }
      const json meta{{"spec", spec.to_json()}, {"seed", spec.optimizer.seed}, {"points", result.points.size()},
                      {"invalid_points", invalid}, {"max_gain", best}};
      write_text_atomically(sidecar, meta.dump(2) + "\n");
      record.outputs = {csv_path.string(), sidecar.string()};
      out << meta.dump(2) << "\n";
      finish(record);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

} // namespace chsh
