#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "uavage/bounds.hpp"
#include "uavage/enumerator.hpp"

using namespace uavage;

namespace {

Scenario small(std::uint64_t seed, int M, double speed, int max_n) {
  GenerationOptions go;
  go.uav.vmax_x = go.uav.vmax_y = speed;
  Scenario s = generate_scenario(M, seed, go);
  std::mt19937_64 rng(seed);
  for (auto& n : s.nodes) n.battery = oracle::battery_for(s, 1 + static_cast<int>(rng() % max_n));
  return s;
}

}  // namespace

TEST_CASE("schedule counts") {
  CHECK(enumerator::schedule_count({1, 1}) == 2);
  CHECK(enumerator::schedule_count({2, 1}) == 3);
  CHECK(enumerator::schedule_count({1, 1}) + enumerator::schedule_count({2, 1}) == 5);
  CHECK(enumerator::schedule_count({}) == 1);
  CHECK(enumerator::schedule_count({0, 0, 4}) == 1);
  CHECK(enumerator::schedule_count({3, 3, 3}) == 1680);
  CHECK_THROWS_AS(enumerator::schedule_count({40, 40}), enumerator::CountOverflow);
  CHECK(enumerator::schedule_count_exact({40, 40}) == enumerator::BigCount("107507208733336176461620"));
}

TEST_CASE("single node, single update") {
  Scenario s;
  Node n;
  n.id = 1;
  n.weight = 1.0;
  s.nodes = {n};
  s.nodes[0].battery = oracle::battery_for(s, 1);
  const auto r = enumerator::enumerate_optimal(s);
  CHECK(r.best_policy.order == std::vector<int>{1});
  CHECK(r.best_solution.objective == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.table.size() == 2);
}

TEST_CASE("table covers the whole count grid") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Scenario s = small(seed, 2, 10.0, 3);
    for (bool zero : {true, false}) {
      enumerator::Options o;
      o.include_zero = zero;
      const auto r = enumerator::enumerate_optimal(s, o);
      std::uint64_t expected = 0;
      for (const auto& c : enumerator::count_grid(s, o)) expected += enumerator::schedule_count(c);
      CHECK(r.table.size() == expected);
    }
  }
  // One node: one entry per count.
  const Scenario one = small(3, 1, 10.0, 4);
  CHECK(enumerator::enumerate_optimal(one).table.size() ==
        static_cast<std::size_t>(bounds::max_updates(one, 1) + 1));
}

TEST_CASE("optimum respects the lower bound and is the table minimum") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Scenario s = small(seed, 1 + static_cast<int>(seed % 3), 3.0 + static_cast<double>(seed), 2);
    const auto r = enumerator::enumerate_optimal(s);
    CHECK(r.best_solution.objective >= bounds::lower_bound(s) - 1e-12);
    for (const auto& e : r.table)
      if (e.status == SolveStatus::optimal) CHECK(r.best_solution.objective <= e.objective + 1e-12);
  }
}

TEST_CASE("parallel evaluation gives the same answer") {
  const Scenario s = small(4, 3, 6.0, 2);
  enumerator::Options one, four;
  one.workers = 1;
  four.workers = 4;
  const auto a = enumerator::enumerate_optimal(s, one);
  const auto b = enumerator::enumerate_optimal(s, four);
  CHECK(a.best_policy == b.best_policy);
  REQUIRE(a.table.size() == b.table.size());
  for (std::size_t i = 0; i < a.table.size(); ++i) {
    CHECK(a.table[i].policy == b.table[i].policy);
    CHECK(a.table[i].status == b.table[i].status);
  }
}

TEST_CASE("budget guard") {
  const Scenario s = small(1, 3, 10.0, 3);
  enumerator::Options o;
  o.budget = 3;
  CHECK_THROWS_AS(enumerator::enumerate_optimal(s, o), enumerator::BudgetExceeded);
}

TEST_CASE("per-count curve") {
  Scenario s;
  Node n;
  n.id = 1;
  n.weight = 1.0;
  s.nodes = {n};
  s.uav.vmax_x = s.uav.vmax_y = 1e4;
  s.nodes[0].battery = oracle::battery_for(s, 6);
  const auto curve = enumerator::per_count_best(s, 1);
  REQUIRE(curve.size() == 7);
  CHECK(curve[0] == 1.0);
  for (int k = 0; k <= 6; ++k) CHECK(curve[k] == doctest::Approx(1.0 / (k + 1)).epsilon(1e-6));

  s.nodes[0].location = {500, 300};
  s.uav.vmax_x = s.uav.vmax_y = 1.0;
  s.uav.horizon = 1500;
  const auto slow = enumerator::per_count_best(s, 1);
  for (int k = 0; k <= 6; ++k)
    if (!std::isnan(slow[k])) CHECK(slow[k] >= 1.0 / (k + 1) - 1e-12);
}
