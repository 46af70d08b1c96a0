#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavage/mdp_env.hpp"
#include "uavage/scenario.hpp"
#include "uavage/trajectory.hpp"

namespace uavage::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// Bumped whenever a CSV layout below changes.
inline constexpr int kCsvSchemaVersion = 1;

std::string code_version();

/// Collects written files and stamps manifest.json into the output directory.
class RunRecord {
 public:
  RunRecord(fs::path out_dir, std::string command, std::vector<std::string> argv);
  const fs::path& dir() const { return dir_; }
  fs::path file(const std::string& name);  // registers the output
  json& config() { return config_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void write_manifest(const json& summary = json::object()) const;

 private:
  fs::path dir_;
  std::string command_;
  std::vector<std::string> argv_;
  std::vector<std::string> outputs_;
  json config_ = json::object();
  std::optional<std::uint64_t> seed_;
};

void write_json(const fs::path& p, const json& j);

json to_json(const TrajectorySolution& sol);
json to_json(const MergedSchedule& u);

/// index,time_s,x_m,y_m,node ; endpoints carry node 0.
void write_trajectory_csv(const fs::path& p, const Scenario& s, const TrajectorySolution& sol);

/// time_s,aoi_1..aoi_M,weighted
void write_aoi_csv(const fs::path& p, const Scenario& s, const TrajectorySolution& sol, int grid);

/// One JSON object per line: episode, step, action, reward, terminal, infeasible, policy.
void append_replay_log(std::ofstream& out, int episode, const std::vector<Transition>& ts);

}  // namespace uavage::cli
