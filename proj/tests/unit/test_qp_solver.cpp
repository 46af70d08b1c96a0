#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "../support/oracles.hpp"
#include "uavage/bounds.hpp"
#include "uavage/trajectory.hpp"

using namespace uavage;

namespace {

Scenario hover_scenario(double battery = 1.0) {
  Scenario s;
  Node n;
  n.id = 1;
  n.battery = battery;
  n.weight = 1.0;
  s.nodes = {n};
  s.uav.vmax_x = s.uav.vmax_y = 1e4;
  return s;
}

Scenario segment_scenario(double vmax, int n_bar_plus_half_tenths = 0) {
  Scenario s;
  Node n;
  n.id = 1;
  n.location = {200, 0};
  n.battery = 1.0;
  n.weight = 1.0;
  s.nodes = {n};
  s.uav.initial = {0, 0};
  s.uav.final = {400, 0};
  s.uav.vmax_x = s.uav.vmax_y = vmax;
  if (n_bar_plus_half_tenths > 0) s.nodes[0].battery = n_bar_plus_half_tenths / 10.0 * oracle::overhead_energy(s);
  return s;
}

SchedulePolicy repeat(int node, int n) {
  SchedulePolicy u;
  u.order.assign(static_cast<std::size_t>(n), node);
  return u;
}

}  // namespace

TEST_CASE("policy text round trip") {
  CHECK(parse_policy("1, 2,1").order == std::vector<int>{1, 2, 1});
  CHECK(parse_policy("").empty());
  CHECK(format_policy(parse_policy("3,1,2")) == "3,1,2");
  CHECK_THROWS(parse_policy("1,x"));
}

TEST_CASE("time quadratic") {
  const auto q = build_time_quadratic(parse_policy("1,2,1,1"), 2);
  REQUIRE(q.size() == 2);
  Eigen::MatrixXd two(2, 2);
  two << 2, -1, -1, 2;
  CHECK(q[1].size() == 1);
  const auto q2 = build_time_quadratic(repeat(1, 2), 1);
  CHECK(q2[0] == two);
  const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q[0]).eigenvalues();
  CHECK(ev[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ev[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 900);
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + static_cast<int>(rng() % 6);
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t[i] = u(rng);
    std::sort(t.data(), t.data() + n);
    const Eigen::MatrixXd qm = build_time_quadratic(repeat(1, n), 1)[0];
    const double quad = t.dot(qm * t) + 900.0 * 900.0 - 2.0 * 900.0 * t[n - 1];
    const double brute = oracle::gap_squares(std::vector<double>(t.data(), t.data() + n), 900.0);
    REQUIRE(std::abs(quad - brute) <= 1e-12 * brute * 10);
  }
}

TEST_CASE("single update while hovering") {
  const Scenario s = hover_scenario();
  const auto sol = solve_schedule(s, repeat(1, 1));
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.times[0] == doctest::Approx(450.0).epsilon(1e-6));
  CHECK(std::abs(sol.waypoints[0].x) < 1e-3);
  CHECK(std::abs(sol.waypoints[0].y) < 1e-3);
  CHECK(sol.objective == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("empty schedule") {
  const auto sol = solve_schedule(hover_scenario(), SchedulePolicy{});
  CHECK(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == 1.0);
  CHECK(sol.times.empty());
}

TEST_CASE("too many updates is infeasible") {
  Scenario s = hover_scenario();
  s.nodes[0].battery = oracle::battery_for(s, 3);
  REQUIRE(bounds::max_updates(s, 1) == 3);
  CHECK(solve_schedule(s, repeat(1, 3)).status == SolveStatus::optimal);
  const auto bad = solve_schedule(s, repeat(1, 4));
  CHECK(bad.status == SolveStatus::infeasible);
  CHECK_FALSE(bad.reason.empty());
}

TEST_CASE("speed-limited infeasibility is certified") {
  Scenario s = segment_scenario(0.1);  // cannot even cross the segment
  s.uav.final = {0, 0};
  s.nodes[0].location = {400, 0};
  s.nodes[0].battery = oracle::battery_for(s, 2);
  s.uav.horizon = 900;
  // Reaching within sqrt(c) of the node needs far more than 0.1 m/s.
  const auto sol = solve_schedule(s, repeat(1, 1));
  CHECK(sol.status == SolveStatus::infeasible);
}

TEST_CASE("three updates on a segment agree with the grid oracle") {
  struct Case {
    double vmax;
    int battery_tenths;
  };
  for (const Case c : {Case{5.0, 0}, Case{1.0, 35}, Case{0.6, 35}, Case{0.5, 32}}) {
    const Scenario s = segment_scenario(c.vmax, c.battery_tenths);
    const auto sol = solve_schedule(s, repeat(1, 3));
    REQUIRE(sol.status == SolveStatus::optimal);
    const double ref = oracle::segment_grid_oracle(s, 3, 5.0);
    CAPTURE(c.vmax);
    CHECK(sol.objective <= ref * 1.02);
    CHECK(sol.objective >= ref * 0.98);
    CHECK(verify_solution(s, sol).feasible());
  }
  // Non-binding constraints: uniform spacing.
  CHECK(solve_schedule(segment_scenario(5.0), repeat(1, 3)).objective == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("solutions pass the independent checker") {
  std::mt19937_64 rng(11);
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GenerationOptions go;
    go.uav.vmax_x = go.uav.vmax_y = 2.0 + static_cast<double>(rng() % 20);
    Scenario s = generate_scenario(1 + static_cast<int>(seed % 3), seed, go);
    for (auto& n : s.nodes) n.battery = oracle::battery_for(s, 1 + static_cast<int>(rng() % 3));
    const auto n_bar = bounds::max_updates(s);
    SchedulePolicy u;
    for (int m = 1; m <= s.node_count(); ++m) u.order.insert(u.order.end(), n_bar[m - 1], m);
    std::shuffle(u.order.begin(), u.order.end(), rng);
    const auto sol = solve_schedule(s, u);
    if (sol.status != SolveStatus::optimal) continue;
    ++solved;
    const auto rep = verify_solution(s, sol);
    CAPTURE(seed);
    CHECK(rep.feasible());
    CHECK(rep.kkt_ok(1e-6));
    CHECK(sol.objective == doctest::Approx(physics::nwaoi(s, sol.per_node_times(s.node_count()))).epsilon(1e-12));
    for (std::size_t i = 1; i < sol.times.size(); ++i) CHECK(sol.times[i] >= sol.times[i - 1]);
    // Dropping the last update never hurts feasibility.
    SchedulePolicy shorter = u;
    shorter.order.pop_back();
    CHECK(solve_schedule(s, shorter).status == SolveStatus::optimal);
  }
  CHECK(solved >= 20);
}

TEST_CASE("objective is convex in the update times") {
  Scenario s = generate_scenario(2, 5, 1000.0);
  const SchedulePolicy u = parse_policy("1,2,1,2,2");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> t(0, 900), th(0, 1);
  auto value = [&](std::vector<double> z) {
    std::sort(z.begin(), z.end());
    TrajectorySolution sol;
    sol.policy = u;
    sol.times = z;
    return physics::nwaoi(s, sol.per_node_times(2));
  };
  for (int k = 0; k < 200; ++k) {
    std::vector<double> a(5), b(5), mix(5);
    for (auto& v : a) v = t(rng);
    for (auto& v : b) v = t(rng);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double w = th(rng);
    for (int i = 0; i < 5; ++i) mix[i] = w * a[i] + (1 - w) * b[i];
    REQUIRE(value(mix) <= w * value(a) + (1 - w) * value(b) + 1e-9);
  }
}

TEST_CASE("minimum speed") {
  SUBCASE("co-located node and endpoints need no speed") {
    Scenario s = hover_scenario();
    s.nodes[0].battery = oracle::battery_for(s, 8);
    const auto sol = solve_min_speed(s, bounds::uniform_schedule(s));
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.v_min <= 1e-6);
  }
  SUBCASE("two-node worked layout stays below 2 m/s") {
    Scenario s;
    Node a, b;
    a.id = 1;
    a.location = {0, 0};
    a.weight = 0.5;
    b.id = 2;
    b.location = {300, 0};
    b.weight = 0.5;
    s.nodes = {a, b};
    s.nodes[0].battery = oracle::battery_for(s, 1);
    s.nodes[1].battery = oracle::battery_for(s, 2);
    s.uav.initial = {0, 0};
    s.uav.final = {300, 0};
    const auto sol = solve_min_speed(s, bounds::uniform_schedule(s));
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.v_min <= 2.0 + 1e-9);
    CHECK(sol.v_min > 0.0);
    const auto chk = verify_min_speed(s, sol);
    CHECK(chk.max_speed_excess <= 1e-6);
    CHECK(chk.max_energy_excess_rel <= 1e-9);
  }
  SUBCASE("coincident instants are refused") {
    Scenario s = generate_scenario(2, 1, 1000.0);
    MergedSchedule u{{0, 0}, {450, 1}, {450, 2}, {900, 0}};
    CHECK_THROWS_AS(solve_min_speed(s, u), CoincidentTimesError);
  }
}
