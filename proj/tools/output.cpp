#include "output.hpp"

#include <iomanip>
#include <stdexcept>

#include "uavage/physics.hpp"

#ifndef UAVAGE_VERSION
#define UAVAGE_VERSION "unknown"
#endif

namespace uavage::cli {

std::string code_version() { return UAVAGE_VERSION; }

RunRecord::RunRecord(fs::path out_dir, std::string command, std::vector<std::string> argv)
    : dir_(std::move(out_dir)), command_(std::move(command)), argv_(std::move(argv)) {
  fs::create_directories(dir_);
}

fs::path RunRecord::file(const std::string& name) {
  outputs_.push_back(name);
  return dir_ / name;
}

void RunRecord::write_manifest(const json& summary) const {
  json m;
  m["command"] = command_;
  m["argv"] = argv_;
  m["code_version"] = code_version();
  m["seed"] = seed_ ? json(*seed_) : json(nullptr);
  m["config"] = config_;
  m["outputs"] = outputs_;
  m["csv_schema_version"] = kCsvSchemaVersion;
  m["summary"] = summary;
  write_json(dir_ / "manifest.json", m);
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

json to_json(const TrajectorySolution& sol) {
  json j;
  j["policy"] = sol.policy.order;
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  j["times_s"] = sol.times;
  json wp = json::array();
  for (const auto& p : sol.waypoints) wp.push_back({p.x, p.y});
  j["waypoints_m"] = wp;
  j["kkt_residual"] = sol.kkt_residual;
  j["iterations"] = sol.iterations;
  j["relaxed"] = sol.relaxed;
  j["coincident"] = sol.coincident;
  if (!sol.reason.empty()) j["reason"] = sol.reason;
  j["duals"] = {{"energy", sol.duals.energy}, {"ordering", sol.duals.ordering}};
  return j;
}

json to_json(const MergedSchedule& u) {
  json a = json::array();
  for (const auto& e : u) a.push_back({{"time_s", e.time}, {"node", e.node}});
  return a;
}

void write_trajectory_csv(const fs::path& p, const Scenario& s, const TrajectorySolution& sol) {
  std::ofstream out(p);
  out << std::setprecision(12);
  out << "index,time_s,x_m,y_m,node\n";
  out << 0 << ',' << 0.0 << ',' << s.uav.initial.x << ',' << s.uav.initial.y << ",0\n";
  for (std::size_t i = 0; i < sol.times.size(); ++i)
    out << i + 1 << ',' << sol.times[i] << ',' << sol.waypoints[i].x << ',' << sol.waypoints[i].y << ','
        << sol.policy.order[i] << '\n';
  out << sol.times.size() + 1 << ',' << s.uav.horizon << ',' << s.uav.final.x << ',' << s.uav.final.y << ",0\n";
}

void write_aoi_csv(const fs::path& p, const Scenario& s, const TrajectorySolution& sol, int grid) {
  const auto trace = physics::aoi_trace(s, sol.per_node_times(s.node_count()), grid);
  std::ofstream out(p);
  out << std::setprecision(12);
  out << "time_s";
  for (const auto& n : s.nodes) out << ",aoi_" << n.id;
  out << ",weighted\n";
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    out << trace.t[k];
    double w = 0.0;
    for (int m = 0; m < s.node_count(); ++m) {
      out << ',' << trace.age[m][k];
      w += s.nodes[m].weight * trace.age[m][k];
    }
    out << ',' << w << '\n';
  }
}

void append_replay_log(std::ofstream& out, int episode, const std::vector<Transition>& ts) {
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto& t = ts[k];
    json j;
    j["episode"] = episode;
    j["step"] = k;
    j["action"] = t.action;
    j["reward"] = t.reward;
    j["terminal"] = t.terminal;
    j["infeasible"] = t.infeasible;
    const Eigen::VectorXd col = t.next_state.last_column();
    j["last_column"] = std::vector<double>(col.data(), col.data() + col.size());
    out << j.dump() << '\n';
  }
}

}  // namespace uavage::cli
