#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavage {

inline constexpr int kScenarioFormatVersion = 1;

/// Planar point in meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Ground node observing one physical process.
struct Node {
  int id = 0;               // 1-based, matches schedule entries
  Point2 location;          // meters
  double battery = 0.0;     // E_max, joules
  double weight = 0.0;      // importance weight lambda
  double aoi_floor = 0.0;   // A_min, seconds; reporting only

  friend bool operator==(const Node&, const Node&) = default;
};

/// Line-of-sight channel and packet constants.
struct ChannelParams {
  double beta0 = 1e-3;         // gain at 1 m (-30 dB)
  double noise_power = 1e-13;  // watts (-100 dBm)
  double packet_bits = 1e7;    // S
  double bandwidth = 1e6;      // B, hertz

  double spectral_load() const { return packet_bits / bandwidth; }

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

struct UavParams {
  double altitude = 80.0;  // h, meters
  double vmax_x = 25.0;    // m/s
  double vmax_y = 25.0;    // m/s
  Point2 initial;
  Point2 final;
  double horizon = 900.0;  // tau, seconds

  friend bool operator==(const UavParams&, const UavParams&) = default;
};

/// A complete problem instance. Immutable once validated; share freely across threads.
struct Scenario {
  std::vector<Node> nodes;
  ChannelParams channel;
  UavParams uav;
  double region = 1000.0;  // side of the square deployment area, meters

  int node_count() const { return static_cast<int>(nodes.size()); }
  /// Node by 1-based id position (schedules use 1..M).
  const Node& node(int index) const { return nodes.at(static_cast<std::size_t>(index - 1)); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure (malformed document, missing field, bad type).
class ScenarioParseError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

/// Document parsed but an invariant is violated; message names the invariant.
class ScenarioValidationError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

// Rescales weights to sum to one. Leaves already-normalized weights bit-identical.
void normalize_weights(Scenario& s);

// Throws ScenarioValidationError on the first violated invariant.
void validate(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

/// Random instance in the simulation regime: coordinates uniform on [0, region],
/// batteries uniform on [battery_lo, battery_hi] J, weights uniform then normalized.
struct GenerationOptions {
  double region = 1000.0;
  double battery_lo = 0.1;
  double battery_hi = 1.0;
  ChannelParams channel{};
  UavParams uav{};  // endpoints are overwritten by the generator
};

Scenario generate_scenario(int m, std::uint64_t seed, double region);
Scenario generate_scenario(int m, std::uint64_t seed, const GenerationOptions& options);

}  // namespace uavage
