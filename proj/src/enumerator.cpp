#include "uavage/enumerator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

#include "uavage/bounds.hpp"

namespace uavage::enumerator {

CountOverflow::CountOverflow(BigCount e)
    : std::overflow_error("schedule count " + e.str() + " exceeds 2^63 - 1"), exact(std::move(e)) {}

BudgetExceeded::BudgetExceeded(BigCount r, std::uint64_t b)
    : std::runtime_error("enumeration needs " + r.str() + " solves, budget is " + std::to_string(b)),
      required(std::move(r)),
      budget(b) {}

BigCount schedule_count_exact(const std::vector<int>& counts) {
  // Product of binomials C(n_1 + ... + n_k, n_k), each exact.
  BigCount total = 1;
  long long placed = 0;
  for (int n : counts) {
    if (n < 0) throw std::invalid_argument("schedule_count: negative count");
    for (int j = 1; j <= n; ++j) {
      ++placed;
      total *= placed;
      total /= j;
    }
  }
  return total;
}

std::uint64_t schedule_count(const std::vector<int>& counts) {
  BigCount c = schedule_count_exact(counts);
  if (c > BigCount(std::numeric_limits<std::int64_t>::max())) throw CountOverflow(std::move(c));
  return static_cast<std::uint64_t>(c);
}

int default_workers() {
  if (const char* env = std::getenv("UAVAGE_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

std::vector<std::vector<int>> count_grid(const Scenario& s, const Options& o) {
  const auto n_bar = bounds::max_updates(s);
  const int M = s.node_count();
  const int lo = o.include_zero ? 0 : 1;
  const int cap = o.cap < 0 ? std::accumulate(n_bar.begin(), n_bar.end(), 0) : o.cap;
  std::vector<std::vector<int>> grid;
  if (std::any_of(n_bar.begin(), n_bar.end(), [lo](int n) { return n < lo; })) return grid;
  std::vector<int> c(static_cast<std::size_t>(M), lo);
  for (;;) {
    if (std::accumulate(c.begin(), c.end(), 0) <= cap) grid.push_back(c);
    int k = M - 1;
    while (k >= 0 && c[k] == n_bar[k]) c[k--] = lo;
    if (k < 0) break;
    ++c[k];
  }
  return grid;
}

namespace {

std::vector<SchedulePolicy> interleavings(const std::vector<int>& counts) {
  SchedulePolicy base;
  for (std::size_t m = 0; m < counts.size(); ++m) base.order.insert(base.order.end(), counts[m], static_cast<int>(m) + 1);
  std::vector<SchedulePolicy> out;
  do {
    out.push_back(base);
  } while (std::next_permutation(base.order.begin(), base.order.end()));
  return out;
}

bool better(double g, const SchedulePolicy& u, double best_g, const SchedulePolicy& best_u) {
  return g < best_g || (g == best_g && u.order < best_u.order);
}

}  // namespace

Result enumerate_optimal(const Scenario& s, const Options& o) {
  const auto grid = count_grid(s, o);
  BigCount required = 0;
  for (const auto& c : grid) required += schedule_count_exact(c);
  if (required > BigCount(o.budget)) throw BudgetExceeded(required, o.budget);

  Result res;
  for (const auto& c : grid)
    for (auto& u : interleavings(c)) res.table.push_back({std::move(u), c, 0.0, SolveStatus::optimal});

  const int workers = std::max(1, o.workers > 0 ? o.workers : default_workers());
  std::atomic<std::size_t> next{0};
  auto run = [&]() {
    for (std::size_t i = next++; i < res.table.size(); i = next++) {
      auto& e = res.table[i];
      const TrajectorySolution sol = solve_schedule(s, e.policy, o.solver);
      e.status = sol.status;
      e.objective = sol.feasible() ? sol.objective : std::numeric_limits<double>::quiet_NaN();
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  double best_g = 1.0;
  SchedulePolicy best_u;
  for (const auto& e : res.table)
    if (e.status == SolveStatus::optimal && better(e.objective, e.policy, best_g, best_u)) {
      best_g = e.objective;
      best_u = e.policy;
    }
  res.best_policy = best_u;
  res.best_solution = solve_schedule(s, best_u, o.solver);
  return res;
}

std::vector<double> per_count_best(const Scenario& s, int node, const SolverOptions& solver) {
  const int n_bar = bounds::max_updates(s, node);
  std::vector<double> curve;
  for (int n = 0; n <= n_bar; ++n) {
    SchedulePolicy u;
    u.order.assign(static_cast<std::size_t>(n), node);
    const TrajectorySolution sol = solve_schedule(s, u, solver);
    curve.push_back(sol.feasible() ? sol.objective : std::numeric_limits<double>::quiet_NaN());
  }
  return curve;
}

}  // namespace uavage::enumerator
