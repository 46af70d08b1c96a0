#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uavage/physics.hpp"
#include "uavage/scenario.hpp"

namespace uavage {

/// Ordered node indices (1-based); entry i is the node serving the i-th update.
struct SchedulePolicy {
  std::vector<int> order;

  std::size_t size() const { return order.size(); }
  bool empty() const { return order.empty(); }
  /// Update count per node, length M.
  std::vector<int> counts(int node_count) const;
  /// For each node, the positions in `order` it occupies.
  std::vector<std::vector<int>> positions(int node_count) const;

  friend bool operator==(const SchedulePolicy&, const SchedulePolicy&) = default;
  friend auto operator<=>(const SchedulePolicy&, const SchedulePolicy&) = default;
};

/// Parses "1,2,1" (blank string means the empty policy).
SchedulePolicy parse_policy(const std::string& text);
std::string format_policy(const SchedulePolicy& u);

enum class SolveStatus { optimal, infeasible, max_iterations };
std::string to_string(SolveStatus s);

/// Lagrange multipliers in physical units (per m^2 for energy, per m for speed, per s for ordering).
struct TrajectoryDuals {
  std::vector<double> energy;   // length M; zero for nodes without updates
  std::vector<double> speed_x_pos, speed_x_neg, speed_y_pos, speed_y_neg;  // n+1 legs each
  std::vector<double> ordering;  // n+1 legs
};

struct TrajectorySolution {
  SchedulePolicy policy;
  std::vector<double> times;       // t_1..t_n, seconds
  std::vector<Point2> waypoints;   // UAV position at each update
  double objective = 1.0;          // NWAoI of the returned times
  SolveStatus status = SolveStatus::optimal;
  double kkt_residual = 0.0;       // scaled units
  int iterations = 0;
  bool relaxed = false;            // constraint set had no strict interior
  std::vector<int> coincident;     // i where t_i and t_{i+1} coincide (0-based, i+1 < n)
  std::string reason;              // why infeasible / not certified
  TrajectoryDuals duals;

  bool feasible() const { return status == SolveStatus::optimal; }
  /// Per-node update times (inverse of the merge mapping).
  UpdateTimes per_node_times(int node_count) const;
  /// Per-node waypoints, parallel to per_node_times.
  UpdateLocations per_node_locations(int node_count) const;
};

struct SolverOptions {
  double tol = 1e-6;
  int max_iterations = 200;
};

/// Tridiagonal (2 on the diagonal, -1 off it) time quadratic for each node, sized by that
/// node's update count. Empty matrices for nodes that never update.
std::vector<Eigen::MatrixXd> build_time_quadratic(const SchedulePolicy& u, int node_count);

/// Optimal update times and waypoints for a fixed schedule.
TrajectorySolution solve_schedule(const Scenario& s, const SchedulePolicy& u, const SolverOptions& options = {});
TrajectorySolution solve_schedule(const Scenario& s, const SchedulePolicy& u, double tol);

/// Time-ordered list of updates; node 0 marks the initial (t = 0) and final (t = tau) endpoints.
struct ScheduledUpdate {
  double time = 0.0;
  int node = 0;

  friend bool operator==(const ScheduledUpdate&, const ScheduledUpdate&) = default;
};
using MergedSchedule = std::vector<ScheduledUpdate>;

class CoincidentTimesError : public std::runtime_error {
 public:
  CoincidentTimesError(int first, int second, double time);
  int first;   // index in the merged schedule
  int second;
  double time;
};

struct MinSpeedSolution {
  double v_min = 0.0;             // m/s, shared by both axes
  std::vector<Point2> waypoints;  // one per inner (non-endpoint) schedule entry
  MergedSchedule schedule;
  SolveStatus status = SolveStatus::optimal;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool relaxed = false;
  std::string reason;
};

/// Minimum common axis speed that lets the UAV serve a fixed merged schedule within every
/// node's energy budget. Throws CoincidentTimesError when two consecutive entries share a time.
MinSpeedSolution solve_min_speed(const Scenario& s, const MergedSchedule& schedule, const SolverOptions& options = {});

/// Post-hoc check computed straight from the physical model, independent of the solver.
struct FeasibilityReport {
  double max_energy_excess_rel = 0.0;  // (used - battery) / battery, per node max
  double max_speed_excess = 0.0;       // meters beyond vmax * dt on any leg/axis
  double max_order_violation = 0.0;    // seconds
  double max_box_violation = 0.0;      // seconds outside [0, tau]
  double stationarity = 0.0;           // scaled gradient-of-Lagrangian inf-norm
  double complementarity = 0.0;        // max |mu_j g_j|
  double dual_negativity = 0.0;        // max(-mu_j, 0)
  double objective_mismatch = 0.0;     // |reported - recomputed|

  bool feasible(double speed_tol = 1e-6, double energy_tol = 1e-9) const;
  bool kkt_ok(double tol) const;
};

FeasibilityReport verify_solution(const Scenario& s, const TrajectorySolution& sol);

/// Checks constraints of a min-speed solution at its returned waypoints; returns the worst
/// speed excess in meters (<= 0 means satisfied) and the worst relative energy excess.
struct MinSpeedCheck {
  double max_speed_excess = 0.0;
  double max_energy_excess_rel = 0.0;
};
MinSpeedCheck verify_min_speed(const Scenario& s, const MinSpeedSolution& sol);

}  // namespace uavage
