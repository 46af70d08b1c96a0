#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "uavage/scenario.hpp"

using namespace uavage;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "uavage_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

const char* kThreeNodes = R"({
  "format_version": 1,
  "region": 1000,
  "channel": {"beta0": 0.001, "noise_power_w": 1e-13, "packet_bits": 1e7, "bandwidth_hz": 1e6},
  "uav": {"altitude_m": 80, "vmax_x": 25, "vmax_y": 25, "initial": [0, 500], "final": [500, 500], "horizon_s": 900},
  "nodes": [
    {"x": 100, "y": 200, "battery_j": 0.5, "weight": 0.2, "aoi_floor_s": 1.0},
    {"x": 400, "y": 700, "battery_j": 0.3, "weight": 0.3},
    {"x": 800, "y": 100, "battery_j": 0.9, "weight": 0.5}
  ]
})";

}  // namespace

TEST_CASE("well-formed file loads with every field") {
  const auto p = temp_file("three.json");
  write(p, kThreeNodes);
  const Scenario s = load_scenario(p);
  CHECK(s.node_count() == 3);
  CHECK(s.node(1).location == Point2{100, 200});
  CHECK(s.node(1).aoi_floor == 1.0);
  CHECK(s.node(3).battery == 0.9);
  CHECK(s.uav.final == Point2{500, 500});
  CHECK(s.channel.beta0 == 0.001);
}

TEST_CASE("weights are renormalized on load") {
  const auto p = temp_file("weights.json");
  write(p, R"({"format_version":1,"uav":{"initial":[0,0],"final":[0,0]},
    "nodes":[{"x":0,"y":0,"battery_j":1,"weight":2},{"x":10,"y":0,"battery_j":1,"weight":2}]})");
  const Scenario s = load_scenario(p);
  CHECK(s.node(1).weight == 0.5);
  CHECK(s.node(2).weight == 0.5);
}

TEST_CASE("negative battery is rejected by name") {
  const auto p = temp_file("bad_battery.json");
  write(p, R"({"format_version":1,"uav":{"initial":[0,0],"final":[0,0]},
    "nodes":[{"x":0,"y":0,"battery_j":-1,"weight":1}]})");
  CHECK_THROWS_WITH_AS(load_scenario(p), doctest::Contains("battery must be positive"), ScenarioValidationError);
}

TEST_CASE("malformed documents raise parse errors") {
  const auto p = temp_file("broken.json");
  write(p, "{ not json");
  CHECK_THROWS_AS(load_scenario(p), ScenarioParseError);
  CHECK_THROWS_AS(load_scenario(temp_file("does_not_exist.json")), ScenarioError);
}

TEST_CASE("unreachable endpoints are rejected") {
  Scenario s = generate_scenario(2, 1, 1000.0);
  s.uav.horizon = 1.0;
  s.uav.initial = {0, 0};
  s.uav.final = {1000, 0};
  CHECK_THROWS_AS(validate(s), ScenarioValidationError);
}

TEST_CASE("generation is a pure function of its inputs") {
  CHECK(generate_scenario(3, 7, 1000.0) == generate_scenario(3, 7, 1000.0));
  CHECK_FALSE(generate_scenario(3, 7, 1000.0) == generate_scenario(3, 8, 1000.0));
  const Scenario one = generate_scenario(1, 0, 1000.0);
  CHECK(one.node_count() == 1);
  CHECK(one.node(1).weight == 1.0);
}

TEST_CASE("generated values stay in range over many seeds") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Scenario s = generate_scenario(5, seed, 1000.0);
    double wsum = 0.0;
    for (const auto& n : s.nodes) {
      REQUIRE(n.location.x >= 0.0);
      REQUIRE(n.location.x <= 1000.0);
      REQUIRE(n.location.y >= 0.0);
      REQUIRE(n.location.y <= 1000.0);
      REQUIRE(n.battery >= 0.1);
      REQUIRE(n.battery <= 1.0);
      wsum += n.weight;
    }
    REQUIRE(std::abs(wsum - 1.0) <= 1e-9);
    for (const Point2 p : {s.uav.initial, s.uav.final}) {
      REQUIRE(p.x >= 0.0);
      REQUIRE(p.x <= 1000.0);
      REQUIRE(p.y >= 0.0);
      REQUIRE(p.y <= 1000.0);
    }
    REQUIRE_NOTHROW(validate(s));
  }
}

TEST_CASE("save then load reproduces the scenario exactly") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Scenario s = generate_scenario(1 + static_cast<int>(seed % 5), seed, 1000.0);
    const auto p = temp_file("roundtrip.json");
    save_scenario(s, p);
    save_scenario(s, p);  // overwrite
    const Scenario back = load_scenario(p);
    REQUIRE(back == s);
    double wsum = 0.0;
    for (const auto& n : back.nodes) wsum += n.weight;
    REQUIRE(std::abs(wsum - 1.0) <= 1e-9);
  }
}

TEST_CASE("missing beta0 falls back to the default") {
  const Scenario s = scenario_from_json_text(
      R"({"format_version":1,"channel":{"noise_power_w":1e-13},"uav":{"initial":[0,0],"final":[0,0]},
          "nodes":[{"x":0,"y":0,"battery_j":1,"weight":1}]})");
  CHECK(s.channel.beta0 == 1e-3);
}
