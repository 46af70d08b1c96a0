#include "uavage/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uavage/qcqp.hpp"

namespace uavage {

std::vector<int> SchedulePolicy::counts(int node_count) const {
  std::vector<int> c(static_cast<std::size_t>(node_count), 0);
  for (int m : order) ++c.at(static_cast<std::size_t>(m - 1));
  return c;
}

std::vector<std::vector<int>> SchedulePolicy::positions(int node_count) const {
  std::vector<std::vector<int>> p(static_cast<std::size_t>(node_count));
  for (std::size_t i = 0; i < order.size(); ++i) p.at(static_cast<std::size_t>(order[i] - 1)).push_back(static_cast<int>(i));
  return p;
}

SchedulePolicy parse_policy(const std::string& text) {
  SchedulePolicy u;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad schedule entry '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("bad schedule entry '" + item + "'");
    u.order.push_back(v);
  }
  return u;
}

std::string format_policy(const SchedulePolicy& u) {
  std::string out;
  for (std::size_t i = 0; i < u.order.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(u.order[i]);
  }
  return out;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

UpdateTimes TrajectorySolution::per_node_times(int node_count) const {
  UpdateTimes out(static_cast<std::size_t>(node_count));
  for (std::size_t i = 0; i < times.size(); ++i) out.at(static_cast<std::size_t>(policy.order[i] - 1)).push_back(times[i]);
  return out;
}

UpdateLocations TrajectorySolution::per_node_locations(int node_count) const {
  UpdateLocations out;
  out.per_node.resize(static_cast<std::size_t>(node_count));
  for (std::size_t i = 0; i < waypoints.size(); ++i)
    out.per_node.at(static_cast<std::size_t>(policy.order[i] - 1)).push_back(waypoints[i]);
  return out;
}

std::vector<Eigen::MatrixXd> build_time_quadratic(const SchedulePolicy& u, int node_count) {
  std::vector<Eigen::MatrixXd> q;
  for (int c : u.counts(node_count)) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(c, c);
    for (int i = 0; i < c; ++i) {
      m(i, i) = 2.0;
      if (i + 1 < c) m(i, i + 1) = m(i + 1, i) = -1.0;
    }
    q.push_back(std::move(m));
  }
  return q;
}

namespace {

void check_policy(const Scenario& s, const SchedulePolicy& u) {
  for (int m : u.order)
    if (m < 1 || m > s.node_count())
      throw std::invalid_argument("schedule entry " + std::to_string(m) + " outside 1.." + std::to_string(s.node_count()));
}

// Energy ball for node m over the listed x/y variable slots, divided by the scaled budget
// so that the row reads  sum |p - L_m|^2 / c - 1 <= 0.
void add_energy_ball(qcqp::Problem& p, const std::vector<int>& x_slots, const std::vector<int>& y_slots, Point2 node,
                       double budget) {
  const int dim = p.dimension();
  const double div = budget > 0.0 ? budget : 1.0;
  qcqp::Constraint c;
  c.linear = Eigen::VectorXd::Zero(dim);
  double konst = 0.0;
  for (std::size_t k = 0; k < x_slots.size(); ++k) {
    c.quad_index.push_back(x_slots[k]);
    c.quad_coeff.push_back(2.0 / div);
    c.quad_index.push_back(y_slots[k]);
    c.quad_coeff.push_back(2.0 / div);
    c.linear[x_slots[k]] = -2.0 * node.x / div;
    c.linear[y_slots[k]] = -2.0 * node.y / div;
    konst += node.x * node.x + node.y * node.y;
  }
  c.constant = (konst - budget) / div;
  p.constraints.push_back(std::move(c));
}

}  // namespace

TrajectorySolution solve_schedule(const Scenario& s, const SchedulePolicy& u, double tol) {
  SolverOptions o;
  o.tol = tol;
  return solve_schedule(s, u, o);
}

TrajectorySolution solve_schedule(const Scenario& s, const SchedulePolicy& u, const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_schedule: tol must be positive");
  check_policy(s, u);
  const int M = s.node_count();
  const int n = static_cast<int>(u.size());

  TrajectorySolution sol;
  sol.policy = u;
  sol.duals.energy.assign(static_cast<std::size_t>(M), 0.0);
  if (n == 0) {
    sol.objective = 1.0;
    return sol;
  }

  const auto counts = u.counts(M);
  for (int m = 1; m <= M; ++m) {
    if (counts[m - 1] > 0 && physics::energy_budget_constant(s, m, counts[m - 1]) < 0.0) {
      sol.status = SolveStatus::infeasible;
      sol.reason = "node " + std::to_string(m) + " cannot afford " + std::to_string(counts[m - 1]) + " updates";
      sol.objective = std::numeric_limits<double>::quiet_NaN();
      return sol;
    }
  }

  const double tau = s.uav.horizon;
  const double R = s.region;
  const auto slot_t = [](int i) { return i; };
  const auto slot_x = [n](int i) { return n + i; };
  const auto slot_y = [n](int i) { return 2 * n + i; };
  const int dim = 3 * n;

  qcqp::Problem prob;
  prob.objective_hessian = Eigen::MatrixXd::Zero(dim, dim);
  prob.objective_linear = Eigen::VectorXd::Zero(dim);
  prob.objective_constant = 0.0;

  const auto positions = u.positions(M);
  const auto quads = build_time_quadratic(u, M);
  for (int m = 0; m < M; ++m) {
    const double w = s.nodes[m].weight;
    const auto& idx = positions[m];
    prob.objective_constant += w;  // tau^2 term after scaling
    if (idx.empty()) continue;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
        prob.objective_hessian(slot_t(idx[a]), slot_t(idx[b])) += 2.0 * w * quads[m](a, b);
    prob.objective_linear[slot_t(idx.back())] += -2.0 * w;
  }

  // Energy balls in scaled coordinates.
  std::vector<int> energy_row(static_cast<std::size_t>(M), -1);
  for (int m = 0; m < M; ++m) {
    const auto& idx = positions[m];
    if (idx.empty()) continue;
    std::vector<int> xs, ys;
    for (int i : idx) {
      xs.push_back(slot_x(i));
      ys.push_back(slot_y(i));
    }
    const Point2 loc{s.nodes[m].location.x / R, s.nodes[m].location.y / R};
    const double budget = physics::energy_budget_constant(s, m + 1, counts[m]) / (R * R);
    energy_row[m] = static_cast<int>(prob.constraints.size());
    add_energy_ball(prob, xs, ys, loc, budget);
  }

  // Speed couplings over legs 0..n; leg i runs from waypoint i to i+1 (0 and n+1 fixed).
  const double kx = s.uav.vmax_x * tau / R;
  const double ky = s.uav.vmax_y * tau / R;
  const Point2 start{s.uav.initial.x / R, s.uav.initial.y / R};
  const Point2 finish{s.uav.final.x / R, s.uav.final.y / R};
  const int legs = n + 1;
  const int speed_base = static_cast<int>(prob.constraints.size());
  for (int axis = 0; axis < 2; ++axis) {
    const double k = axis == 0 ? kx : ky;
    const double p0 = axis == 0 ? start.x : start.y;
    const double p1 = axis == 0 ? finish.x : finish.y;
    for (int sign : {+1, -1}) {
      for (int leg = 0; leg < legs; ++leg) {
        qcqp::Constraint c;
        c.linear = Eigen::VectorXd::Zero(dim);
        double konst = 0.0;
        // sign * (p_{leg+1} - p_leg) - k * (s_{leg+1} - s_leg) <= 0
        if (leg + 1 <= n) {
          c.linear[axis == 0 ? slot_x(leg) : slot_y(leg)] += sign;
          c.linear[slot_t(leg)] += -k;
        } else {
          konst += sign * p1 - k * 1.0;
        }
        if (leg >= 1) {
          c.linear[axis == 0 ? slot_x(leg - 1) : slot_y(leg - 1)] -= sign;
          c.linear[slot_t(leg - 1)] += k;
        } else {
          konst += -sign * p0;
        }
        c.constant = konst;
        prob.constraints.push_back(std::move(c));
      }
    }
  }
  const int order_base = static_cast<int>(prob.constraints.size());
  for (int leg = 0; leg < legs; ++leg) {
    qcqp::Constraint c;
    c.linear = Eigen::VectorXd::Zero(dim);
    if (leg >= 1) c.linear[slot_t(leg - 1)] = 1.0;
    if (leg + 1 <= n) c.linear[slot_t(leg)] = -1.0;
    else c.constant = -1.0;
    prob.constraints.push_back(std::move(c));
  }

  Eigen::VectorXd guess(dim);
  for (int i = 0; i < n; ++i) {
    guess[slot_t(i)] = static_cast<double>(i + 1) / (n + 1);
    const Point2 l = s.node(u.order[i]).location;
    guess[slot_x(i)] = l.x / R;
    guess[slot_y(i)] = l.y / R;
  }

  qcqp::Options qo;
  qo.tol = options.tol;
  qo.max_iterations = options.max_iterations;
  const qcqp::Result r = qcqp::solve(prob, guess, qo);

  sol.iterations = r.iterations;
  sol.kkt_residual = r.kkt_residual;
  sol.relaxed = r.relaxed;
  sol.times.resize(static_cast<std::size_t>(n));
  sol.waypoints.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    sol.times[i] = std::clamp(r.z[slot_t(i)], 0.0, 1.0) * tau;
    sol.waypoints[i] = {r.z[slot_x(i)] * R, r.z[slot_y(i)] * R};
  }
  switch (r.status) {
    case qcqp::Status::optimal: sol.status = SolveStatus::optimal; break;
    case qcqp::Status::infeasible:
      sol.status = SolveStatus::infeasible;
      sol.reason = "phase-one certificate: no trajectory meets speed and energy limits";
      break;
    case qcqp::Status::max_iterations:
      sol.status = SolveStatus::max_iterations;
      sol.reason = "iteration cap reached without certification";
      break;
  }
  if (sol.status == SolveStatus::infeasible) {
    sol.objective = std::numeric_limits<double>::quiet_NaN();
    return sol;
  }

  // Duals back to physical units.
  for (int m = 0; m < M; ++m) {
    if (energy_row[m] < 0) continue;
    const double budget = physics::energy_budget_constant(s, m + 1, counts[m]);
    const double row_scale = budget > 0.0 ? budget : R * R;
    sol.duals.energy[m] = r.duals[energy_row[m]] / row_scale;
  }
  auto speed_dual = [&](int block, int leg) { return r.duals[speed_base + block * legs + leg] / R; };
  for (int leg = 0; leg < legs; ++leg) {
    sol.duals.speed_x_pos.push_back(speed_dual(0, leg));
    sol.duals.speed_x_neg.push_back(speed_dual(1, leg));
    sol.duals.speed_y_pos.push_back(speed_dual(2, leg));
    sol.duals.speed_y_neg.push_back(speed_dual(3, leg));
    sol.duals.ordering.push_back(r.duals[order_base + leg] / tau);
  }

  for (int i = 0; i + 1 < n; ++i)
    if (sol.times[i + 1] - sol.times[i] <= 1e-5 * tau) sol.coincident.push_back(i);

  sol.objective = physics::nwaoi(s, sol.per_node_times(M));
  return sol;
}

CoincidentTimesError::CoincidentTimesError(int a, int b, double t)
    : std::runtime_error("merged schedule entries " + std::to_string(a) + " and " + std::to_string(b) +
                         " coincide at t = " + std::to_string(t)),
      first(a),
      second(b),
      time(t) {}

MinSpeedSolution solve_min_speed(const Scenario& s, const MergedSchedule& schedule, const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_min_speed: tol must be positive");
  const int M = s.node_count();
  const double tau = s.uav.horizon;
  const double R = s.region;

  // Inner entries plus the fixed endpoints.
  MergedSchedule full;
  full.push_back({0.0, 0});
  for (const auto& e : schedule)
    if (e.node != 0) {
      if (e.node < 1 || e.node > M) throw std::invalid_argument("solve_min_speed: node index out of range");
      full.push_back(e);
    }
  full.push_back({tau, 0});
  for (std::size_t i = 0; i + 1 < full.size(); ++i)
    if (!(full[i + 1].time > full[i].time)) throw CoincidentTimesError(static_cast<int>(i), static_cast<int>(i + 1), full[i].time);

  MinSpeedSolution sol;
  sol.schedule = full;
  const int N = static_cast<int>(full.size()) - 2;
  std::vector<int> counts(static_cast<std::size_t>(M), 0);
  for (int k = 1; k <= N; ++k) ++counts[full[k].node - 1];
  for (int m = 1; m <= M; ++m) {
    if (counts[m - 1] > 0 && physics::energy_budget_constant(s, m, counts[m - 1]) < 0.0) {
      sol.status = SolveStatus::infeasible;
      sol.reason = "node " + std::to_string(m) + " cannot afford " + std::to_string(counts[m - 1]) + " updates";
      return sol;
    }
  }

  const int dim = 2 * N + 1;
  const int slot_v = 2 * N;
  auto slot_x = [](int k) { return k; };
  auto slot_y = [N](int k) { return N + k; };

  qcqp::Problem prob;
  prob.objective_hessian = Eigen::MatrixXd::Zero(dim, dim);
  prob.objective_linear = Eigen::VectorXd::Zero(dim);
  prob.objective_linear[slot_v] = 1.0;

  for (int m = 0; m < M; ++m) {
    std::vector<int> xs, ys;
    for (int k = 0; k < N; ++k)
      if (full[k + 1].node == m + 1) {
        xs.push_back(slot_x(k));
        ys.push_back(slot_y(k));
      }
    if (xs.empty()) continue;
    const Point2 loc{s.nodes[m].location.x / R, s.nodes[m].location.y / R};
    add_energy_ball(prob, xs, ys, loc, physics::energy_budget_constant(s, m + 1, counts[m]) / (R * R));
  }

  const Point2 start{s.uav.initial.x / R, s.uav.initial.y / R};
  const Point2 finish{s.uav.final.x / R, s.uav.final.y / R};
  for (int axis = 0; axis < 2; ++axis) {
    for (int sign : {+1, -1}) {
      for (int leg = 0; leg <= N; ++leg) {
        const double dt = (full[leg + 1].time - full[leg].time) / tau;
        qcqp::Constraint c;
        c.linear = Eigen::VectorXd::Zero(dim);
        double konst = 0.0;
        if (leg + 1 <= N) c.linear[axis == 0 ? slot_x(leg) : slot_y(leg)] += sign;
        else konst += sign * (axis == 0 ? finish.x : finish.y);
        if (leg >= 1) c.linear[axis == 0 ? slot_x(leg - 1) : slot_y(leg - 1)] -= sign;
        else konst -= sign * (axis == 0 ? start.x : start.y);
        c.linear[slot_v] = -dt;
        c.constant = konst;
        prob.constraints.push_back(std::move(c));
      }
    }
  }

  Eigen::VectorXd guess(dim);
  double vmax_needed = 0.0;
  std::vector<Point2> pts{start};
  for (int k = 0; k < N; ++k) {
    const Point2 l = s.node(full[k + 1].node).location;
    guess[slot_x(k)] = l.x / R;
    guess[slot_y(k)] = l.y / R;
    pts.push_back({l.x / R, l.y / R});
  }
  pts.push_back(finish);
  for (int leg = 0; leg <= N; ++leg) {
    const double dt = (full[leg + 1].time - full[leg].time) / tau;
    vmax_needed = std::max({vmax_needed, std::abs(pts[leg + 1].x - pts[leg].x) / dt,
                            std::abs(pts[leg + 1].y - pts[leg].y) / dt});
  }
  guess[slot_v] = 2.0 * vmax_needed + 1.0;

  qcqp::Options qo;
  qo.tol = options.tol;
  qo.max_iterations = options.max_iterations;
  const qcqp::Result r = qcqp::solve(prob, guess, qo);
  sol.iterations = r.iterations;
  sol.kkt_residual = r.kkt_residual;
  sol.relaxed = r.relaxed;
  switch (r.status) {
    case qcqp::Status::optimal: sol.status = SolveStatus::optimal; break;
    case qcqp::Status::infeasible:
      sol.status = SolveStatus::infeasible;
      sol.reason = "phase-one certificate";
      break;
    case qcqp::Status::max_iterations:
      sol.status = SolveStatus::max_iterations;
      sol.reason = "iteration cap reached without certification";
      break;
  }
  for (int k = 0; k < N; ++k) sol.waypoints.push_back({r.z[slot_x(k)] * R, r.z[slot_y(k)] * R});

  // Report the speed the returned waypoints actually need (never below the LP optimum).
  std::vector<Point2> path{s.uav.initial};
  path.insert(path.end(), sol.waypoints.begin(), sol.waypoints.end());
  path.push_back(s.uav.final);
  double v = 0.0;
  for (int leg = 0; leg <= N; ++leg) {
    const double dt = full[leg + 1].time - full[leg].time;
    v = std::max({v, std::abs(path[leg + 1].x - path[leg].x) / dt, std::abs(path[leg + 1].y - path[leg].y) / dt});
  }
  sol.v_min = v;
  return sol;
}

bool FeasibilityReport::feasible(double speed_tol, double energy_tol) const {
  return max_energy_excess_rel <= energy_tol && max_speed_excess <= speed_tol && max_order_violation <= speed_tol &&
         max_box_violation <= speed_tol;
}

bool FeasibilityReport::kkt_ok(double tol) const {
  return stationarity <= tol && complementarity <= tol && dual_negativity <= tol && objective_mismatch <= 1e-9;
}

FeasibilityReport verify_solution(const Scenario& s, const TrajectorySolution& sol) {
  FeasibilityReport rep;
  const int M = s.node_count();
  const int n = static_cast<int>(sol.times.size());
  const double tau = s.uav.horizon;
  const double R = s.region;
  if (n == 0) return rep;

  // Energy in joules through the channel model.
  std::vector<double> used(static_cast<std::size_t>(M), 0.0);
  for (int i = 0; i < n; ++i) used[sol.policy.order[i] - 1] += physics::update_energy(s, sol.waypoints[i], sol.policy.order[i]);
  for (int m = 0; m < M; ++m)
    rep.max_energy_excess_rel = std::max(rep.max_energy_excess_rel, (used[m] - s.nodes[m].battery) / s.nodes[m].battery);

  std::vector<double> t{0.0};
  std::vector<Point2> p{s.uav.initial};
  t.insert(t.end(), sol.times.begin(), sol.times.end());
  p.insert(p.end(), sol.waypoints.begin(), sol.waypoints.end());
  t.push_back(tau);
  p.push_back(s.uav.final);
  for (int leg = 0; leg <= n; ++leg) {
    const double dt = t[leg + 1] - t[leg];
    rep.max_speed_excess = std::max(rep.max_speed_excess, std::abs(p[leg + 1].x - p[leg].x) - s.uav.vmax_x * dt);
    rep.max_speed_excess = std::max(rep.max_speed_excess, std::abs(p[leg + 1].y - p[leg].y) - s.uav.vmax_y * dt);
    rep.max_order_violation = std::max(rep.max_order_violation, -dt);
  }
  for (double ti : sol.times) rep.max_box_violation = std::max({rep.max_box_violation, -ti, ti - tau});

  const double recomputed = physics::nwaoi(s, sol.per_node_times(M));
  rep.objective_mismatch = std::abs(recomputed - sol.objective);

  const auto& d = sol.duals;
  if (d.speed_x_pos.size() != static_cast<std::size_t>(n + 1)) {
    rep.stationarity = std::numeric_limits<double>::infinity();
    return rep;
  }

  // Gradient of the Lagrangian in physical variables.
  std::vector<double> gt(static_cast<std::size_t>(n), 0.0), gx(static_cast<std::size_t>(n), 0.0),
      gy(static_cast<std::size_t>(n), 0.0);
  const auto pos = sol.policy.positions(M);
  for (int m = 0; m < M; ++m) {
    const auto& idx = pos[m];
    const double w = s.nodes[m].weight;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const double prev = a == 0 ? 0.0 : sol.times[idx[a - 1]];
      const double next = a + 1 == idx.size() ? tau : sol.times[idx[a + 1]];
      const double ti = sol.times[idx[a]];
      gt[idx[a]] += 2.0 * w * ((ti - prev) - (next - ti)) / (tau * tau);
      const Point2 l = s.nodes[m].location;
      gx[idx[a]] += 2.0 * d.energy[m] * (sol.waypoints[idx[a]].x - l.x);
      gy[idx[a]] += 2.0 * d.energy[m] * (sol.waypoints[idx[a]].y - l.y);
    }
  }
  for (int leg = 0; leg <= n; ++leg) {
    const double sx = d.speed_x_pos[leg] + d.speed_x_neg[leg];
    const double sy = d.speed_y_pos[leg] + d.speed_y_neg[leg];
    const double dt_coeff = -(s.uav.vmax_x * sx + s.uav.vmax_y * sy);
    const double dx_coeff = d.speed_x_pos[leg] - d.speed_x_neg[leg];
    const double dy_coeff = d.speed_y_pos[leg] - d.speed_y_neg[leg];
    // leg runs from waypoint leg-1 (0-based; -1 = start) to waypoint leg (n = finish)
    if (leg < n) {
      gt[leg] += dt_coeff - d.ordering[leg];
      gx[leg] += dx_coeff;
      gy[leg] += dy_coeff;
    }
    if (leg >= 1) {
      gt[leg - 1] += -dt_coeff + d.ordering[leg];
      gx[leg - 1] -= dx_coeff;
      gy[leg - 1] -= dy_coeff;
    }
  }
  for (int i = 0; i < n; ++i)
    rep.stationarity = std::max({rep.stationarity, std::abs(gt[i]) * tau, std::abs(gx[i]) * R, std::abs(gy[i]) * R});

  auto comp = [&](double mu, double g) {
    rep.complementarity = std::max(rep.complementarity, std::abs(mu * g));
    rep.dual_negativity = std::max(rep.dual_negativity, -mu);
  };
  for (int m = 0; m < M; ++m) {
    if (pos[m].empty()) continue;
    double g = -physics::energy_budget_constant(s, m + 1, static_cast<int>(pos[m].size()));
    for (int i : pos[m]) {
      const double dx = sol.waypoints[i].x - s.nodes[m].location.x;
      const double dy = sol.waypoints[i].y - s.nodes[m].location.y;
      g += dx * dx + dy * dy;
    }
    comp(d.energy[m], g);
  }
  for (int leg = 0; leg <= n; ++leg) {
    const double dt = t[leg + 1] - t[leg];
    const double dx = p[leg + 1].x - p[leg].x;
    const double dy = p[leg + 1].y - p[leg].y;
    comp(d.speed_x_pos[leg], dx - s.uav.vmax_x * dt);
    comp(d.speed_x_neg[leg], -dx - s.uav.vmax_x * dt);
    comp(d.speed_y_pos[leg], dy - s.uav.vmax_y * dt);
    comp(d.speed_y_neg[leg], -dy - s.uav.vmax_y * dt);
    comp(d.ordering[leg], -dt);
  }
  return rep;
}

MinSpeedCheck verify_min_speed(const Scenario& s, const MinSpeedSolution& sol) {
  MinSpeedCheck chk;
  chk.max_speed_excess = -std::numeric_limits<double>::infinity();
  const int M = s.node_count();
  std::vector<Point2> path{s.uav.initial};
  path.insert(path.end(), sol.waypoints.begin(), sol.waypoints.end());
  path.push_back(s.uav.final);
  const auto& sched = sol.schedule;
  for (std::size_t leg = 0; leg + 1 < path.size(); ++leg) {
    const double dt = sched[leg + 1].time - sched[leg].time;
    chk.max_speed_excess = std::max(chk.max_speed_excess, std::abs(path[leg + 1].x - path[leg].x) - sol.v_min * dt);
    chk.max_speed_excess = std::max(chk.max_speed_excess, std::abs(path[leg + 1].y - path[leg].y) - sol.v_min * dt);
  }
  std::vector<double> used(static_cast<std::size_t>(M), 0.0);
  for (std::size_t k = 0; k < sol.waypoints.size(); ++k) {
    const int node = sched[k + 1].node;
    used[node - 1] += physics::update_energy(s, sol.waypoints[k], node);
  }
  chk.max_energy_excess_rel = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m)
    chk.max_energy_excess_rel = std::max(chk.max_energy_excess_rel, (used[m] - s.nodes[m].battery) / s.nodes[m].battery);
  return chk;
}

}  // namespace uavage
