#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "uavage/scenario.hpp"
#include "uavage/trajectory.hpp"

namespace uavage {

/// (M+1) x (n+1): rows 0..M-1 hold residual node energies, the last row the update time.
/// Column 0 is [E_1^max, ..., E_M^max, 0].
struct StateMatrix {
  Eigen::MatrixXd data;

  int node_count() const { return static_cast<int>(data.rows()) - 1; }
  int columns() const { return static_cast<int>(data.cols()); }
  Eigen::VectorXd column(int i) const { return data.col(i); }
  Eigen::VectorXd last_column() const { return data.col(data.cols() - 1); }

  friend bool operator==(const StateMatrix& a, const StateMatrix& b) {
    return a.data.rows() == b.data.rows() && a.data.cols() == b.data.cols() && a.data == b.data;
  }
};

StateMatrix initial_state(const Scenario& s);

/// State built directly from a solved schedule (energy bookkeeping at each waypoint).
StateMatrix build_state(const Scenario& s, const TrajectorySolution& sol);

/// Memoizes solve_schedule by policy; safe to share between environments on one scenario.
class SolveCache {
 public:
  TrajectorySolution get_or_solve(const Scenario& s, const SchedulePolicy& u, const SolverOptions& options);
  std::size_t size() const;
  std::size_t hits() const;

 private:
  mutable std::mutex mu_;
  std::map<std::vector<int>, TrajectorySolution> entries_;
  std::size_t hits_ = 0;
};

struct EnvOptions {
  SolverOptions solver;
  double infeasible_penalty = 0.0;  // reward for an infeasible action is -penalty
  std::shared_ptr<SolveCache> cache;
  bool log_solver_failures = true;
};

struct Transition {
  StateMatrix state;
  int action = 0;
  double reward = 0.0;
  StateMatrix next_state;
  bool terminal = false;
  bool infeasible = false;  // the action was rejected
};

class TerminalStepError : public std::logic_error {
 public:
  TerminalStepError() : std::logic_error("step called on a finished episode") {}
};

/// Schedule-prefix MDP. Action m > 0 appends node m and re-solves the whole schedule;
/// action 0 ends the episode. An infeasible append ends the episode without changing the policy.
class SchedulingEnv {
 public:
  SchedulingEnv(const Scenario& s, EnvOptions options = {});

  const StateMatrix& reset();
  Transition step(int action);

  bool terminal() const { return terminal_; }
  const StateMatrix& state() const { return state_; }
  const SchedulePolicy& policy() const { return solution_.policy; }
  const TrajectorySolution& solution() const { return solution_; }
  double objective() const { return solution_.objective; }
  int action_count() const { return scenario_.node_count() + 1; }
  const Scenario& scenario() const { return scenario_; }
  int solver_failures() const { return solver_failures_; }

 private:
  TrajectorySolution solve(const SchedulePolicy& u);

  Scenario scenario_;
  EnvOptions options_;
  StateMatrix state_;
  TrajectorySolution solution_;
  bool terminal_ = false;
  int solver_failures_ = 0;
};

double episode_return(const std::vector<Transition>& transitions);

}  // namespace uavage
