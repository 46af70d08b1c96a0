#pragma once

#include <span>
#include <vector>

#include "uavage/scenario.hpp"

namespace uavage {

/// Per-node update instants t_m, each ascending within [0, tau]. Index 0 is node 1.
using UpdateTimes = std::vector<std::vector<double>>;

/// Per-node update locations, parallel to UpdateTimes.
struct UpdateLocations {
  std::vector<std::vector<Point2>> per_node;
};

namespace physics {

/// Line-of-sight channel gain beta0 / (h^2 + |uav - L_m|^2).
double channel_gain(const Scenario& s, Point2 uav_xy, int node);

/// Factor 2^{S/B} - 1 from the Shannon rate requirement.
double shannon_factor(const ChannelParams& c);

/// Energy in joules that node `node` spends on one update received at uav_xy.
double update_energy(const Scenario& s, Point2 uav_xy, int node);

/// Energy of a single update received directly overhead.
double overhead_update_energy(const Scenario& s, int node);

/// Residual squared-distance budget c_m (m^2) left after n_m overhead updates.
/// Negative means n_m updates exceed the battery.
double energy_budget_constant(const Scenario& s, int node, int n_m);

/// Normalized weighted AoI in (0, 1]; no updates at all gives exactly 1.
double nwaoi(const Scenario& s, const UpdateTimes& times);

/// Sampled piecewise-linear AoI trace. Each update instant appears twice: once with the
/// pre-reset value (left limit) and once with the reset value, so the trace is exact.
struct AoiTrace {
  std::vector<double> t;
  std::vector<std::vector<double>> age;  // age[m][k] = A_{m+1}(t[k])
};

AoiTrace aoi_trace(const Scenario& s, const UpdateTimes& times, int grid);

/// Trapezoid rule over a trace, per node.
std::vector<double> integrate_trace(const AoiTrace& trace);

}  // namespace physics
}  // namespace uavage
