#include "uavage/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavage::physics {

namespace {

double squared_offset(const Scenario& s, Point2 uav_xy, int node) {
  const Point2 l = s.node(node).location;
  const double dx = uav_xy.x - l.x;
  const double dy = uav_xy.y - l.y;
  return dx * dx + dy * dy;
}

}  // namespace

double channel_gain(const Scenario& s, Point2 uav_xy, int node) {
  const double h = s.uav.altitude;
  return s.channel.beta0 / (h * h + squared_offset(s, uav_xy, node));
}

double shannon_factor(const ChannelParams& c) { return std::exp2(c.spectral_load()) - 1.0; }

double update_energy(const Scenario& s, Point2 uav_xy, int node) {
  return s.channel.noise_power * shannon_factor(s.channel) / channel_gain(s, uav_xy, node);
}

double overhead_update_energy(const Scenario& s, int node) {
  return update_energy(s, s.node(node).location, node);
}

double energy_budget_constant(const Scenario& s, int node, int n_m) {
  if (n_m < 0) throw std::invalid_argument("energy_budget_constant: negative update count");
  const auto& c = s.channel;
  const double h = s.uav.altitude;
  return s.node(node).battery * c.beta0 / (c.noise_power * shannon_factor(c)) -
         static_cast<double>(n_m) * h * h;
}

double nwaoi(const Scenario& s, const UpdateTimes& times) {
  if (times.size() != s.nodes.size()) throw std::invalid_argument("nwaoi: one time vector per node required");
  const double tau = s.uav.horizon;
  double total = 0.0;
  for (std::size_t m = 0; m < times.size(); ++m) {
    double prev = 0.0;
    double sum = 0.0;
    for (double t : times[m]) {
      sum += (t - prev) * (t - prev);
      prev = t;
    }
    sum += (tau - prev) * (tau - prev);
    total += s.nodes[m].weight * sum;
  }
  return total / (tau * tau);
}

AoiTrace aoi_trace(const Scenario& s, const UpdateTimes& times, int grid) {
  if (grid < 2) throw std::invalid_argument("aoi_trace: grid must be at least 2");
  if (times.size() != s.nodes.size()) throw std::invalid_argument("aoi_trace: one time vector per node required");
  const double tau = s.uav.horizon;

  struct Sample {
    double t;
    bool left;  // left limit at an update instant
  };
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(grid) + 8);
  for (int k = 0; k < grid; ++k) samples.push_back({tau * k / (grid - 1), false});
  for (const auto& tm : times) {
    for (double t : tm) {
      samples.push_back({t, true});
      samples.push_back({t, false});
    }
  }
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return a.t < b.t || (a.t == b.t && a.left && !b.left);
  });
  samples.erase(std::unique(samples.begin(), samples.end(),
                            [](const Sample& a, const Sample& b) { return a.t == b.t && a.left == b.left; }),
                samples.end());

  AoiTrace trace;
  trace.t.reserve(samples.size());
  for (const auto& smp : samples) trace.t.push_back(smp.t);
  trace.age.assign(times.size(), {});
  for (std::size_t m = 0; m < times.size(); ++m) {
    auto sorted = times[m];
    std::sort(sorted.begin(), sorted.end());
    const double floor = s.nodes[m].aoi_floor;
    auto& row = trace.age[m];
    row.reserve(samples.size());
    // Linear sweep; the update pointer only advances.
    std::size_t next = 0;
    double last = 0.0;
    for (const auto& smp : samples) {
      while (next < sorted.size() && (sorted[next] < smp.t || (!smp.left && sorted[next] == smp.t))) {
        last = sorted[next];
        ++next;
      }
      row.push_back(floor + smp.t - last);
    }
  }
  return trace;
}

std::vector<double> integrate_trace(const AoiTrace& trace) {
  std::vector<double> out(trace.age.size(), 0.0);
  for (std::size_t m = 0; m < trace.age.size(); ++m) {
    const auto& a = trace.age[m];
    double acc = 0.0;
    for (std::size_t k = 1; k < trace.t.size(); ++k)
      acc += 0.5 * (a[k] + a[k - 1]) * (trace.t[k] - trace.t[k - 1]);
    out[m] = acc;
  }
  return out;
}

}  // namespace uavage::physics
