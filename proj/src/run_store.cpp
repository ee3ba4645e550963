#include "chsh/run_store.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace chsh {

using nlohmann::json;

json RunRecord::to_json() const {
  return json{
      {"run_id", run_id},   {"subcommand", subcommand}, {"config", config},
      {"seed", seed},       {"workers", workers},       {"version", version},
      {"outputs", outputs}, {"started_utc", started_utc}, {"wall_clock_ms", wall_clock_ms},
  };
}

RunRecord RunRecord::from_json(const json& j) {
  RunRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  r.subcommand = j.at("subcommand").get<std::string>();
  r.config = j.at("config");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.workers = j.value("workers", 1);
  r.version = j.value("version", std::string());
  r.outputs = j.value("outputs", std::vector<std::string>{});
  r.started_utc = j.value("started_utc", std::string());
  r.wall_clock_ms = j.value("wall_clock_ms", 0.0);
  return r;
}

std::string config_hash(const json& config) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 16777619u;
  }
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", h);
  return buf;
}

RunRecord RunStore::begin(const std::string& subcommand, const json& config, std::uint64_t seed, int workers) {
  RunRecord r;
  r.subcommand = subcommand;
  r.config = config;
  r.seed = seed;
  r.workers = workers;
#ifdef CHSH_VERSION
  r.version = CHSH_VERSION;
#endif
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
  r.started_utc = stamp;

  std::filesystem::create_directories(root_);
  const std::string base = std::string(stamp) + "-" + config_hash(config);
  for (int attempt = 1;; ++attempt) {
    const std::string id = attempt == 1 ? base : base + "-" + std::to_string(attempt);
    // create_directory reports false when the directory already exists.
    if (std::filesystem::create_directory(root_ / id)) {
      r.run_id = id;
      break;
    }
    if (attempt > 10000) throw std::runtime_error("could not allocate a run directory under " + root_.string());
  }
  return r;
}

void RunStore::commit(const RunRecord& r) const {
  std::ofstream out(directory(r) / "run.json");
  if (!out) throw std::runtime_error("cannot write run record for " + r.run_id);
  out << r.to_json().dump(2) << '\n';
}

RunRecord RunStore::load(const std::string& run_id) const {
  std::ifstream in(root_ / run_id / "run.json");
  if (!in) throw std::runtime_error("no run record for " + run_id);
  return RunRecord::from_json(json::parse(in));
}

} // namespace chsh
