#include "uavage/mdp_env.hpp"

#include <algorithm>
#include <iostream>

namespace uavage {

StateMatrix initial_state(const Scenario& s) {
  const int M = s.node_count();
  StateMatrix st;
  st.data = Eigen::MatrixXd::Zero(M + 1, 1);
  for (int m = 0; m < M; ++m) st.data(m, 0) = s.nodes[m].battery;
  return st;
}

StateMatrix build_state(const Scenario& s, const TrajectorySolution& sol) {
  const int M = s.node_count();
  const int n = static_cast<int>(sol.times.size());
  StateMatrix st;
  st.data = Eigen::MatrixXd::Zero(M + 1, n + 1);
  Eigen::VectorXd residual(M);
  for (int m = 0; m < M; ++m) residual[m] = s.nodes[m].battery;
  st.data.col(0).head(M) = residual;
  for (int i = 0; i < n; ++i) {
    const int node = sol.policy.order[i];
    residual[node - 1] -= physics::update_energy(s, sol.waypoints[i], node);
    st.data.col(i + 1).head(M) = residual.cwiseMax(0.0);
    st.data(M, i + 1) = sol.times[i];
  }
  return st;
}

TrajectorySolution SolveCache::get_or_solve(const Scenario& s, const SchedulePolicy& u, const SolverOptions& options) {
  {
    std::lock_guard lock(mu_);
    auto it = entries_.find(u.order);
    if (it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  TrajectorySolution sol = solve_schedule(s, u, options);
  std::lock_guard lock(mu_);
  entries_.emplace(u.order, sol);
  return sol;
}

std::size_t SolveCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::size_t SolveCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

SchedulingEnv::SchedulingEnv(const Scenario& s, EnvOptions options) : scenario_(s), options_(std::move(options)) {
  reset();
}

const StateMatrix& SchedulingEnv::reset() {
  solution_ = TrajectorySolution{};
  solution_.duals.energy.assign(static_cast<std::size_t>(scenario_.node_count()), 0.0);
  state_ = initial_state(scenario_);
  terminal_ = false;
  return state_;
}

TrajectorySolution SchedulingEnv::solve(const SchedulePolicy& u) {
  if (options_.cache) return options_.cache->get_or_solve(scenario_, u, options_.solver);
  return solve_schedule(scenario_, u, options_.solver);
}

Transition SchedulingEnv::step(int action) {
  if (terminal_) throw TerminalStepError();
  if (action < 0 || action > scenario_.node_count())
    throw std::invalid_argument("action " + std::to_string(action) + " outside 0.." +
                                std::to_string(scenario_.node_count()));
  Transition tr;
  tr.state = state_;
  tr.action = action;
  if (action == 0) {
    terminal_ = true;
    tr.terminal = true;
    tr.next_state = state_;
    return tr;
  }
  SchedulePolicy next = solution_.policy;
  next.order.push_back(action);
  TrajectorySolution sol = solve(next);
  if (!sol.feasible()) {
    if (sol.status == SolveStatus::max_iterations) {
      ++solver_failures_;
      if (options_.log_solver_failures)
        std::clog << "warning: solver did not certify schedule [" << format_policy(next)
                  << "]; treating it as infeasible\n";
    }
    terminal_ = true;
    tr.terminal = true;
    tr.infeasible = true;
    tr.reward = -options_.infeasible_penalty;
    tr.next_state = state_;
    return tr;
  }
  tr.reward = solution_.objective - sol.objective;
  solution_ = std::move(sol);
  state_ = build_state(scenario_, solution_);
  tr.next_state = state_;
  return tr;
}

double episode_return(const std::vector<Transition>& transitions) {
  double r = 0.0;
  for (const auto& t : transitions) r += t.reward;
  return r;
}

}  // namespace uavage
