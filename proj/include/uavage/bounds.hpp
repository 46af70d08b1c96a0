#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavage/physics.hpp"
#include "uavage/scenario.hpp"
#include "uavage/trajectory.hpp"

namespace uavage::bounds {

/// Largest update count a node can afford when every update is received overhead.
/// Agrees with energy_budget_constant: c(n_bar) >= 0 and c(n_bar + 1) < 0.
int max_updates(const Scenario& s, int node);
std::vector<int> max_updates(const Scenario& s);

/// sum_m lambda_m / (n_bar_m + 1). Ignores speed, so it lower-bounds every schedule.
double lower_bound(const Scenario& s);

/// Per-node times i*tau/(n_bar_m + 1), i = 1..n_bar_m.
UpdateTimes uniform_times(const Scenario& s);

/// Merged uniform schedule with the endpoints (node 0) at t = 0 and t = tau.
/// Equal times are ordered by node index.
MergedSchedule uniform_schedule(const Scenario& s);

struct DivisorCheck {
  bool ok = true;
  int first = 0;   // offending node pair (1-based) when !ok
  int second = 0;
};

/// True iff the uniform schedule has no coincident instants: (n_bar_m + 1) and (n_bar_p + 1)
/// are coprime for every pair of nodes that update at all.
DivisorCheck divisor_condition(const Scenario& s);
DivisorCheck divisor_condition(const std::vector<int>& n_bar);

class DivisorConditionError : public std::runtime_error {
 public:
  DivisorConditionError(int first, int second);
  int first;
  int second;
};

/// Closed-form speed that suffices for the uniform schedule with overhead waypoints,
/// counting the legs from the initial location and to the final location.
double prop1_upper_bound(const Scenario& s);

/// lambda_m proportional to n_bar_m + 1.
std::vector<double> weight_guidance(const Scenario& s);

struct BoundReport {
  std::vector<int> n_bar;
  double g_min = 1.0;
  MergedSchedule uniform;
  DivisorCheck divisor;
  std::optional<double> v_bar_min;
  std::string v_bar_reason;  // why v_bar_min is absent
  std::vector<double> weight_guidance;
};

BoundReport report(const Scenario& s);

}  // namespace uavage::bounds
