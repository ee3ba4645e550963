#include "chsh/sweep.hpp"

#include "chsh/expression.hpp"
#include "chsh/parallel.hpp"
#include "chsh/search.hpp"
#include "chsh/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace chsh {

using nlohmann::json;

double SweepAxis::value(int k) const {
  if (steps == 1) return min;
  return min + (max - min) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

void SweepSpec::validate() const {
  const auto names = family_parameter_names(family);
  if (names.empty()) throw std::invalid_argument(family_name(family) + " has no parameters to sweep");
  if (axes.empty() || axes.size() > 2) throw std::invalid_argument("a sweep needs one or two axes");
  if (equation.arity() != 4) throw std::invalid_argument("family sweeps need a four-variable equation");
  optimizer.validate();

  auto known = [&](const std::string& p) { return std::find(names.begin(), names.end(), p) != names.end(); };
  std::vector<std::string> assigned;
  auto assign = [&](const std::string& p, const char* what) {
    if (!known(p)) throw std::invalid_argument(std::string(what) + " '" + p + "' is not a parameter of " + family_name(family));
    if (std::find(assigned.begin(), assigned.end(), p) != assigned.end()) {
      throw std::invalid_argument("parameter '" + p + "' is set more than once");
    }
    assigned.push_back(p);
  };
  for (const auto& axis : axes) {
    assign(axis.param, "axis");
    if (axis.steps < 2) throw std::invalid_argument("axis '" + axis.param + "' needs at least 2 steps");
    if (!(axis.max > axis.min) || !std::isfinite(axis.min) || !std::isfinite(axis.max)) {
      throw std::invalid_argument("axis '" + axis.param + "' has an empty range");
    }
  }
  for (const auto& [p, v] : fixed) assign(p, "fixed parameter");
  for (const auto& [p, tie] : ties) {
    assign(p, "tied parameter");
    const bool on_axis = std::any_of(axes.begin(), axes.end(), [&](const SweepAxis& a) { return a.param == tie.source; });
    if (!on_axis && !fixed.contains(tie.source)) {
      throw std::invalid_argument("tie source '" + tie.source + "' is neither an axis nor fixed");
    }
  }
  for (const auto& p : names) {
    if (std::find(assigned.begin(), assigned.end(), p) == assigned.end()) {
      throw std::invalid_argument("parameter '" + p + "' of " + family_name(family) + " is not set");
    }
  }
}

FamilyParams SweepSpec::params_at(const std::vector<double>& coords) const {
  const auto names = family_parameter_names(family);
  std::map<std::string, Complex> values = fixed;
  for (std::size_t k = 0; k < axes.size(); ++k) values[axes[k].param] = coords.at(k);
  for (const auto& [p, tie] : ties) values[p] = tie.scale * values.at(tie.source);
  FamilyParams out;
  for (const auto& p : names) out.values.push_back(values.at(p));
  return out;
}

SweepSpec SweepSpec::from_json(const json& j) {
  SweepSpec s;
  s.family = parse_family(j.at("family").get<std::string>());
  for (const auto& a : j.at("axes")) {
    SweepAxis axis;
    axis.param = a.at("param").get<std::string>();
    axis.min = a.value("min", axis.min);
    axis.max = a.value("max", axis.max);
    axis.steps = a.value("steps", axis.steps);
    s.axes.push_back(axis);
  }
  if (j.contains("fixed")) {
    for (const auto& [name, v] : j["fixed"].items()) {
      s.fixed[name] = v.is_number() ? Complex(v.get<double>(), 0.0) : parse_complex(v.get<std::string>());
    }
  }
  if (j.contains("ties")) {
    for (const auto& [name, v] : j["ties"].items()) {
      ParamTie tie;
      if (v.is_string()) {
        std::string src = v.get<std::string>();
        if (!src.empty() && src.front() == '-') {
          tie.scale = -1.0;
          src.erase(0, 1);
        }
        tie.source = src;
      } else {
        tie.source = v.at("source").get<std::string>();
        tie.scale = v.value("scale", 1.0);
      }
      s.ties[name] = tie;
    }
  }
  s.f_text = j.at("f").get<std::string>();
  s.g_text = j.value("g", std::string("a^b^c^d"));
  s.equation = GameEquation(to_truth_table(parse_expression(s.f_text, question_alphabet(4)), 4),
                            to_truth_table(parse_expression(s.g_text, answer_alphabet(4)), 4));
  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    s.optimizer.restarts = o.value("restarts", s.optimizer.restarts);
    s.optimizer.perturbations = o.value("perturbations", s.optimizer.perturbations);
    s.optimizer.max_evaluations = o.value("max_evaluations", s.optimizer.max_evaluations);
    s.optimizer.tolerance = o.value("tolerance", s.optimizer.tolerance);
    s.optimizer.seed = o.value("seed", s.optimizer.seed);
  }
  s.warm_start = j.value("warm_start", true);
  s.output = j.value("output", std::string());
  return s;
}

json SweepSpec::to_json() const {
  json axes_json = json::array();
  for (const auto& a : axes) axes_json.push_back({{"param", a.param}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}});
  json fixed_json = json::object();
  for (const auto& [p, v] : fixed) fixed_json[p] = format_complex(v);
  json ties_json = json::object();
  for (const auto& [p, t] : ties) ties_json[p] = {{"source", t.source}, {"scale", t.scale}};
  return json{
      {"family", family_name(family)},
      {"axes", std::move(axes_json)},
      {"fixed", std::move(fixed_json)},
      {"ties", std::move(ties_json)},
      {"f", f_text.empty() ? equation.f.to_string() : f_text},
      {"g", g_text.empty() ? equation.g.to_string() : g_text},
      {"f_table", equation.f.to_string()},
      {"g_table", equation.g.to_string()},
      {"optimizer",
       {{"restarts", optimizer.restarts},
        {"perturbations", optimizer.perturbations},
        {"max_evaluations", optimizer.max_evaluations},
        {"tolerance", optimizer.tolerance},
        {"seed", optimizer.seed}}},
      {"warm_start", warm_start},
      {"output", output},
  };
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  SweepResult result;
  result.spec = spec;

  const int cols = spec.axes[0].steps;
  const int rows = spec.axes.size() > 1 ? spec.axes[1].steps : 1;
  result.points.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));

  parallel_for(static_cast<std::size_t>(rows), workers, [&](std::size_t row) {
    std::optional<QuantumStrategy> previous;
    for (int col = 0; col < cols; ++col) {
      const std::size_t index = row * static_cast<std::size_t>(cols) + static_cast<std::size_t>(col);
      SweepPoint& point = result.points[index];
      point.coords.push_back(spec.axes[0].value(col));
      if (spec.axes.size() > 1) point.coords.push_back(spec.axes[1].value(static_cast<int>(row)));

      StateVector psi;
      try {
        psi = make_family_state(spec.family, spec.params_at(point.coords));
      } catch (const std::invalid_argument& e) {
        point.valid = false;
        point.error = e.what();
        continue;
      }
      OptimizerConfig cfg = spec.optimizer;
      cfg.seed = derive_seed(spec.optimizer.seed, {static_cast<std::uint64_t>(index)});
      std::vector<QuantumStrategy> warm;
      if (spec.warm_start && previous) warm.push_back(*previous);
      const QuantumOptimum opt = optimize_quantum(psi, spec.equation, cfg, warm);
      point.valid = true;
      point.gain = opt.gain;
      point.strategy = opt.strategy;
      previous = opt.strategy;
    }
  });
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  const int players = result.spec.equation.arity();
  for (const auto& axis : result.spec.axes) out << axis.param << ',';
  out << "gain,valid";
  for (int i = 1; i <= players; ++i) {
    for (int q = 0; q < 2; ++q) {
      out << ",theta_" << i << '_' << q << ",phi_" << i << '_' << q << ",lambda_" << i << '_' << q;
    }
  }
  out << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  for (const auto& p : result.points) {
    for (double c : p.coords) out << num(c) << ',';
    if (!p.valid) {
      out << ",0";
      for (int k = 0; k < 6 * players; ++k) out << ',';
      out << '\n';
      continue;
    }
    out << num(p.gain) << ",1";
    for (int i = 0; i < players; ++i) {
      for (int q = 0; q < 2; ++q) {
        const auto& g = p.strategy.gate(i, q);
        out << ',' << num(g.theta) << ',' << num(g.phi) << ',' << num(g.lambda);
      }
    }
    out << '\n';
  }
}

FamilyReport family_report(FamilyId id, const GameEquation& eq, int draws, const OptimizerConfig& cfg, int workers) {
  if (draws < 1) throw std::invalid_argument("family report needs at least one draw");
  FamilyReport report;
  report.family = id;
  if (!family_is_parametric(id)) {
    const auto opt = optimize_quantum(make_family_state(id, {}), eq, cfg);
    report.best = opt.gain;
    report.gains = {opt.gain};
    report.params = {FamilyParams{}};
    return report;
  }
  report.gains.resize(static_cast<std::size_t>(draws));
  report.params.resize(static_cast<std::size_t>(draws));
  parallel_for(static_cast<std::size_t>(draws), workers, [&](std::size_t k) {
    const auto draw_seed = derive_seed(cfg.seed, {0xd4a3ull, static_cast<std::uint64_t>(k)});
    report.params[k] = random_family_params(id, draw_seed);
    OptimizerConfig task = cfg;
    task.seed = draw_seed;
    report.gains[k] = optimize_quantum(make_family_state(id, report.params[k]), eq, task).gain;
  });
  report.best = *std::max_element(report.gains.begin(), report.gains.end());
  double sum = 0.0;
  for (double g : report.gains) sum += g;
  report.average = sum / static_cast<double>(report.gains.size());
  return report;
}

} // namespace chsh
