#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "uavage/scenario.hpp"
#include "uavage/trajectory.hpp"

namespace uavage::enumerator {

using BigCount = boost::multiprecision::cpp_int;

class CountOverflow : public std::overflow_error {
 public:
  explicit CountOverflow(BigCount exact);
  BigCount exact;
};

/// Number of distinct interleavings (sum n)! / prod n_m!. Throws CountOverflow above 2^63 - 1.
std::uint64_t schedule_count(const std::vector<int>& counts);
BigCount schedule_count_exact(const std::vector<int>& counts);

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(BigCount required, std::uint64_t budget);
  BigCount required;
  std::uint64_t budget;
};

struct Options {
  int cap = -1;              // max total updates; negative = sum of n_bar
  bool include_zero = true;  // let n_m range down to 0
  std::uint64_t budget = 100000;
  int workers = 0;  // 0 = UAVAGE_WORKERS or 1
  SolverOptions solver;
};

struct Entry {
  SchedulePolicy policy;
  std::vector<int> counts;
  double objective = 0.0;  // NaN unless solved to optimality
  SolveStatus status = SolveStatus::optimal;
};

struct Result {
  SchedulePolicy best_policy;
  TrajectorySolution best_solution;
  std::vector<Entry> table;  // deterministic generation order
};

/// Count vectors visited by enumerate_optimal, in order.
std::vector<std::vector<int>> count_grid(const Scenario& s, const Options& options = {});

/// Exhaustive search for the schedule of least NWAoI. Ties go to the lexicographically smallest
/// schedule. The empty schedule (value 1) is the fallback when nothing else is feasible.
Result enumerate_optimal(const Scenario& s, const Options& options = {});

/// Best NWAoI with n repeated updates of `node` (others idle), for n = 0..n_bar.
/// Entries are NaN where the solve is not optimal.
std::vector<double> per_count_best(const Scenario& s, int node, const SolverOptions& solver = {});

/// Worker count from UAVAGE_WORKERS, at least 1.
int default_workers();

}  // namespace uavage::enumerator
