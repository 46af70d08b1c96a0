#include "uavage/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace uavage {

using nlohmann::json;

namespace {

bool finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ScenarioValidationError(what);
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ScenarioParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ScenarioParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

Point2 point_field(const json& j, const char* key) {
  auto v = field<std::vector<double>>(j, key);
  if (v.size() != 2) throw ScenarioParseError(std::string("field '") + key + "' must have 2 entries");
  return {v[0], v[1]};
}

}  // namespace

void normalize_weights(Scenario& s) {
  double total = 0.0;
  for (const auto& n : s.nodes) total += n.weight;
  if (!(total > 0.0) || !std::isfinite(total))
    throw ScenarioValidationError("weights must have a positive finite sum");
  if (std::abs(total - 1.0) <= 1e-12) return;
  for (auto& n : s.nodes) n.weight /= total;
}

void validate(const Scenario& s) {
  require(!s.nodes.empty(), "scenario needs at least one node");
  std::set<int> ids;
  for (const auto& n : s.nodes) {
    require(ids.insert(n.id).second, "node ids must be unique (duplicate " + std::to_string(n.id) + ")");
    require(n.battery > 0.0 && std::isfinite(n.battery), "battery must be positive");
    require(n.weight >= 0.0 && std::isfinite(n.weight), "weight must be non-negative");
    require(n.aoi_floor >= 0.0 && std::isfinite(n.aoi_floor), "aoi_floor must be non-negative");
    require(finite(n.location), "node location must be finite");
  }
  double total = 0.0;
  for (const auto& n : s.nodes) total += n.weight;
  require(std::abs(total - 1.0) <= 1e-9, "weights must sum to one");

  const auto& c = s.channel;
  require(c.beta0 > 0.0 && std::isfinite(c.beta0), "beta0 must be positive");
  require(c.noise_power > 0.0 && std::isfinite(c.noise_power), "noise_power must be positive");
  require(c.packet_bits > 0.0 && std::isfinite(c.packet_bits), "packet_bits must be positive");
  require(c.bandwidth > 0.0 && std::isfinite(c.bandwidth), "bandwidth must be positive");

  const auto& u = s.uav;
  require(u.altitude > 0.0 && std::isfinite(u.altitude), "altitude must be positive");
  require(u.vmax_x > 0.0 && u.vmax_y > 0.0, "vmax must be positive");
  require(u.horizon > 0.0 && std::isfinite(u.horizon), "horizon must be positive");
  require(finite(u.initial) && finite(u.final), "endpoints must be finite");
  require(s.region > 0.0 && std::isfinite(s.region), "region must be positive");
  require(std::abs(u.final.x - u.initial.x) <= u.vmax_x * u.horizon &&
              std::abs(u.final.y - u.initial.y) <= u.vmax_y * u.horizon,
          "final location must be reachable from the initial location within the horizon");
}

Scenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError(std::string("scenario document is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ScenarioParseError("scenario document must be an object");
  const int version = field<int>(j, "format_version");
  if (version != kScenarioFormatVersion)
    throw ScenarioParseError("unsupported format_version " + std::to_string(version));

  Scenario s;
  s.region = field_or<double>(j, "region", 1000.0);

  const json& ch = j.contains("channel") ? j.at("channel") : json::object();
  s.channel.beta0 = field_or<double>(ch, "beta0", 1e-3);
  s.channel.noise_power = field_or<double>(ch, "noise_power_w", s.channel.noise_power);
  s.channel.packet_bits = field_or<double>(ch, "packet_bits", s.channel.packet_bits);
  s.channel.bandwidth = field_or<double>(ch, "bandwidth_hz", s.channel.bandwidth);

  if (!j.contains("uav")) throw ScenarioParseError("missing field 'uav'");
  const json& uj = j.at("uav");
  s.uav.altitude = field_or<double>(uj, "altitude_m", s.uav.altitude);
  s.uav.vmax_x = field_or<double>(uj, "vmax_x", s.uav.vmax_x);
  s.uav.vmax_y = field_or<double>(uj, "vmax_y", s.uav.vmax_y);
  s.uav.initial = point_field(uj, "initial");
  s.uav.final = point_field(uj, "final");
  s.uav.horizon = field_or<double>(uj, "horizon_s", s.uav.horizon);

  if (!j.contains("nodes") || !j.at("nodes").is_array()) throw ScenarioParseError("missing node list 'nodes'");
  int next_id = 1;
  for (const auto& nj : j.at("nodes")) {
    Node n;
    n.id = field_or<int>(nj, "id", next_id);
    n.location = {field<double>(nj, "x"), field<double>(nj, "y")};
    n.battery = field<double>(nj, "battery_j");
    n.weight = field_or<double>(nj, "weight", 1.0);
    n.aoi_floor = field_or<double>(nj, "aoi_floor_s", 0.0);
    s.nodes.push_back(n);
    next_id = n.id + 1;
  }

  // Battery sign and friends are checked before normalization so the error names them.
  if (s.nodes.empty()) throw ScenarioValidationError("scenario needs at least one node");
  for (const auto& n : s.nodes) {
    require(n.battery > 0.0, "battery must be positive");
    require(n.weight >= 0.0, "weight must be non-negative");
  }
  normalize_weights(s);
  validate(s);
  return s;
}

std::string scenario_to_json_text(const Scenario& s) {
  json j;
  j["format_version"] = kScenarioFormatVersion;
  j["region"] = s.region;
  j["channel"] = {{"beta0", s.channel.beta0},
                  {"noise_power_w", s.channel.noise_power},
                  {"packet_bits", s.channel.packet_bits},
                  {"bandwidth_hz", s.channel.bandwidth}};
  j["uav"] = {{"altitude_m", s.uav.altitude},
              {"vmax_x", s.uav.vmax_x},
              {"vmax_y", s.uav.vmax_y},
              {"initial", {s.uav.initial.x, s.uav.initial.y}},
              {"final", {s.uav.final.x, s.uav.final.y}},
              {"horizon_s", s.uav.horizon}};
  json nodes = json::array();
  for (const auto& n : s.nodes) {
    nodes.push_back({{"id", n.id},
                     {"x", n.location.x},
                     {"y", n.location.y},
                     {"battery_j", n.battery},
                     {"weight", n.weight},
                     {"aoi_floor_s", n.aoi_floor}});
  }
  j["nodes"] = std::move(nodes);
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write scenario file " + path.string());
  out << scenario_to_json_text(s);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Scenario generate_scenario(int m, std::uint64_t seed, double region) {
  GenerationOptions opts;
  opts.region = region;
  return generate_scenario(m, seed, opts);
}

Scenario generate_scenario(int m, std::uint64_t seed, const GenerationOptions& options) {
  if (m < 1) throw std::invalid_argument("generate_scenario: need at least one node");
  if (!(options.region > 0.0)) throw std::invalid_argument("generate_scenario: region must be positive");
  if (!(options.battery_lo > 0.0) || options.battery_hi < options.battery_lo)
    throw std::invalid_argument("generate_scenario: bad battery range");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, options.region);
  std::uniform_real_distribution<double> battery(options.battery_lo, options.battery_hi);
  std::uniform_real_distribution<double> weight(0.0, 1.0);

  Scenario s;
  s.region = options.region;
  s.channel = options.channel;
  s.uav = options.uav;
  s.uav.initial = {coord(rng), coord(rng)};
  s.uav.final = {coord(rng), coord(rng)};
  // Keep the mission reachable when slow kinematics are requested.
  const double reach_x = s.uav.vmax_x * s.uav.horizon;
  const double reach_y = s.uav.vmax_y * s.uav.horizon;
  s.uav.final.x = std::clamp(s.uav.final.x, s.uav.initial.x - reach_x, s.uav.initial.x + reach_x);
  s.uav.final.y = std::clamp(s.uav.final.y, s.uav.initial.y - reach_y, s.uav.initial.y + reach_y);

  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    Node n;
    n.id = i + 1;
    n.location = {coord(rng), coord(rng)};
    n.battery = battery(rng);
    n.weight = weight(rng);
    total += n.weight;
    s.nodes.push_back(n);
  }
  if (!(total > 0.0)) {
    for (auto& n : s.nodes) n.weight = 1.0;
    total = m;
  }
  for (auto& n : s.nodes) n.weight /= total;
  validate(s);
  return s;
}

}  // namespace uavage
