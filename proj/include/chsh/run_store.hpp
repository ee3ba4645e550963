// Persistent record of each CLI invocation. A run lives in
// <output-dir>/<run-id>/ with a run.json describing it; every file the run
// writes is listed in that record.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace chsh {

struct RunRecord {
  std::string run_id;
  std::string subcommand;
  nlohmann::json config;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string version;
  std::vector<std::string> outputs;
  std::string started_utc;
  double wall_clock_ms = 0.0;

  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
};

/// FNV-1a over the compact dump of `config`, as 8 hex digits.
std::string config_hash(const nlohmann::json& config);

class RunStore {
public:
  explicit RunStore(std::filesystem::path root) : root_(std::move(root)) {}

  /// Creates a fresh run directory named <UTC timestamp>-<config hash>,
  /// suffixed with -2, -3, ... if that id is taken; never reuses one.
  RunRecord begin(const std::string& subcommand, const nlohmann::json& config, std::uint64_t seed, int workers);

  std::filesystem::path directory(const RunRecord& r) const { return root_ / r.run_id; }

  /// Writes run.json for the record.
  void commit(const RunRecord& r) const;

  RunRecord load(const std::string& run_id) const;

private:
  std::filesystem::path root_;
};

} // namespace chsh
