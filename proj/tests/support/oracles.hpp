#pragma once

// Independent reference computations used by the unit and acceptance suites.
// None of these call the interior-point solver.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "uavage/physics.hpp"
#include "uavage/scenario.hpp"

namespace oracle {

/// Energy of one overhead update, joules.
inline double overhead_energy(const uavage::Scenario& s) {
  const double h = s.uav.altitude;
  return s.channel.noise_power * (std::exp2(s.channel.packet_bits / s.channel.bandwidth) - 1.0) * h * h /
         s.channel.beta0;
}

/// Battery that allows exactly n overhead updates with half an update to spare.
inline double battery_for(const uavage::Scenario& s, int n) { return (n + 0.5) * overhead_energy(s); }

/// min sum d_i^2 subject to d_i >= lo_i and sum d_i = total, by water-filling:
/// d_i = max(lo_i, theta). Returns +inf when sum lo_i > total.
inline double waterfill_squares(const std::vector<double>& lo, double total) {
  const double need = std::accumulate(lo.begin(), lo.end(), 0.0);
  if (need > total) return std::numeric_limits<double>::infinity();
  std::vector<double> sorted = lo;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  // Try k largest floors pinned, the rest equal to theta.
  double pinned = 0.0;
  for (std::size_t k = 0; k <= sorted.size(); ++k) {
    const double free = static_cast<double>(sorted.size() - k);
    const double theta = (total - pinned) / free;
    const bool ok_free = k == sorted.size() || theta >= sorted[k];
    const bool ok_pinned = k == 0 || theta <= sorted[k - 1];
    if (ok_free && ok_pinned) {
      double v = free * theta * theta;
      for (std::size_t j = 0; j < k; ++j) v += sorted[j] * sorted[j];
      return v;
    }
    if (k < sorted.size()) pinned += sorted[k];
  }
  return std::numeric_limits<double>::infinity();
}

/// One node at (node_x, 0), UAV from (x0, 0) to (x1, 0), n updates. Waypoints restricted to a
/// lattice on the segment; times solved exactly for each waypoint choice. Returns the best NWAoI,
/// or +inf when no lattice choice is feasible.
inline double segment_grid_oracle(const uavage::Scenario& s, int n, double lattice) {
  const double x0 = s.uav.initial.x;
  const double x1 = s.uav.final.x;
  const double lo = std::min(x0, x1), hi = std::max(x0, x1);
  std::vector<double> pts;
  for (double x = lo; x <= hi + 1e-9; x += lattice) pts.push_back(x);
  const double node_x = s.nodes[0].location.x;
  const double budget = uavage::physics::energy_budget_constant(s, 1, n);
  if (budget < 0.0) return std::numeric_limits<double>::infinity();
  const double v = s.uav.vmax_x;
  const double tau = s.uav.horizon;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  // Waypoints visited in travel order (monotone along the segment from x0 to x1).
  const bool forward = x1 >= x0;
  std::function<void(int, int, double)> rec = [&](int k, int start, double used) {
    if (used > budget) return;
    if (k == n) {
      std::vector<double> floors;
      double prev = x0;
      for (int i = 0; i < n; ++i) {
        const double x = pts[idx[i]];
        floors.push_back(std::abs(x - prev) / v);
        prev = x;
      }
      floors.push_back(std::abs(x1 - prev) / v);
      best = std::min(best, waterfill_squares(floors, tau) / (tau * tau));
      return;
    }
    for (int j = start; j < static_cast<int>(pts.size()); ++j) {
      const int p = forward ? j : static_cast<int>(pts.size()) - 1 - j;
      idx[k] = p;
      const double d = pts[p] - node_x;
      rec(k + 1, j, used + d * d);
    }
  };
  rec(0, 0, 0.0);
  return best;
}

/// Tabular value iteration for a deterministic episodic MDP with gamma = 1.
struct ToyMdp {
  int states = 0;
  int actions = 0;
  std::vector<std::vector<double>> reward;    // [s][a]
  std::vector<std::vector<int>> next;         // [s][a], -1 = terminal
};

inline std::vector<std::vector<double>> value_iteration(const ToyMdp& mdp, int sweeps = 1000) {
  std::vector<std::vector<double>> q(mdp.states, std::vector<double>(mdp.actions, 0.0));
  for (int it = 0; it < sweeps; ++it) {
    auto nq = q;
    for (int s = 0; s < mdp.states; ++s)
      for (int a = 0; a < mdp.actions; ++a) {
        const int n = mdp.next[s][a];
        nq[s][a] = mdp.reward[s][a] + (n < 0 ? 0.0 : *std::max_element(q[n].begin(), q[n].end()));
      }
    q = nq;
  }
  return q;
}

/// Brute-force sum of squared inter-update gaps for one node.
inline double gap_squares(const std::vector<double>& t, double tau) {
  double prev = 0.0, acc = 0.0;
  for (double x : t) {
    acc += (x - prev) * (x - prev);
    prev = x;
  }
  return acc + (tau - prev) * (tau - prev);
}

}  // namespace oracle
