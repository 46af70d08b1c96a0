#include "uavage/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace uavage::bounds {

int max_updates(const Scenario& s, int node) {
  const auto& c = s.channel;
  const double h = s.uav.altitude;
  const double ratio = s.node(node).battery * c.beta0 / (c.noise_power * physics::shannon_factor(c) * h * h);
  if (!std::isfinite(ratio)) throw std::domain_error("max_updates: non-finite update ratio");
  int n = static_cast<int>(std::floor(ratio));
  // The floor above and c_m are evaluated with different roundings; settle on c_m.
  while (physics::energy_budget_constant(s, node, n + 1) >= 0.0) ++n;
  while (n > 0 && physics::energy_budget_constant(s, node, n) < 0.0) --n;
  return n;
}

std::vector<int> max_updates(const Scenario& s) {
  std::vector<int> out;
  for (int m = 1; m <= s.node_count(); ++m) out.push_back(max_updates(s, m));
  return out;
}

double lower_bound(const Scenario& s) {
  double g = 0.0;
  for (int m = 1; m <= s.node_count(); ++m) g += s.node(m).weight / (max_updates(s, m) + 1);
  return g;
}

UpdateTimes uniform_times(const Scenario& s) {
  UpdateTimes out;
  const double tau = s.uav.horizon;
  for (int m = 1; m <= s.node_count(); ++m) {
    const int n = max_updates(s, m);
    std::vector<double> t;
    for (int i = 1; i <= n; ++i) t.push_back(tau * i / (n + 1));
    out.push_back(std::move(t));
  }
  return out;
}

MergedSchedule uniform_schedule(const Scenario& s) {
  struct Key {
    long long num;  // i
    long long den;  // n_bar + 1
    int node;
  };
  std::vector<Key> keys;
  for (int m = 1; m <= s.node_count(); ++m) {
    const int n = max_updates(s, m);
    for (int i = 1; i <= n; ++i) keys.push_back({i, n + 1, m});
  }
  // Exact rational ordering so coincident instants compare equal.
  std::stable_sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    const long long l = a.num * b.den;
    const long long r = b.num * a.den;
    return l < r || (l == r && a.node < b.node);
  });
  const double tau = s.uav.horizon;
  MergedSchedule out;
  out.push_back({0.0, 0});
  for (const auto& k : keys) out.push_back({tau * static_cast<double>(k.num) / static_cast<double>(k.den), k.node});
  out.push_back({tau, 0});
  return out;
}

DivisorCheck divisor_condition(const std::vector<int>& n_bar) {
  // Instants i*tau/(a) and j*tau/(b) meet inside (0, tau) exactly when gcd(a, b) > 1,
  // so plain divisibility is not enough (4 and 6 share tau/2).
  for (std::size_t m = 0; m < n_bar.size(); ++m) {
    for (std::size_t p = m + 1; p < n_bar.size(); ++p) {
      // Nodes with no updates have no instants to collide.
      if (n_bar[m] == 0 || n_bar[p] == 0) continue;
      if (std::gcd(n_bar[m] + 1, n_bar[p] + 1) > 1)
        return {false, static_cast<int>(m) + 1, static_cast<int>(p) + 1};
    }
  }
  return {};
}

DivisorCheck divisor_condition(const Scenario& s) { return divisor_condition(max_updates(s)); }

DivisorConditionError::DivisorConditionError(int a, int b)
    : std::runtime_error("divisor condition violated by nodes " + std::to_string(a) + " and " + std::to_string(b)),
      first(a),
      second(b) {}

double prop1_upper_bound(const Scenario& s) {
  const DivisorCheck d = divisor_condition(s);
  if (!d.ok) throw DivisorConditionError(d.first, d.second);
  const MergedSchedule u = uniform_schedule(s);
  auto where = [&](std::size_t k) {
    if (k == 0) return s.uav.initial;
    if (k + 1 == u.size()) return s.uav.final;
    return s.node(u[k].node).location;
  };
  double v = 0.0;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const double dt = u[k + 1].time - u[k].time;
    const Point2 a = where(k);
    const Point2 b = where(k + 1);
    v = std::max({v, std::abs(b.x - a.x) / dt, std::abs(b.y - a.y) / dt});
  }
  return v;
}

std::vector<double> weight_guidance(const Scenario& s) {
  const auto n = max_updates(s);
  const double total = std::accumulate(n.begin(), n.end(), 0.0) + static_cast<double>(n.size());
  std::vector<double> w;
  for (int k : n) w.push_back((k + 1) / total);
  return w;
}

BoundReport report(const Scenario& s) {
  BoundReport r;
  r.n_bar = max_updates(s);
  r.g_min = lower_bound(s);
  r.uniform = uniform_schedule(s);
  r.divisor = divisor_condition(r.n_bar);
  if (r.divisor.ok) {
    r.v_bar_min = prop1_upper_bound(s);
  } else {
    r.v_bar_reason = "nodes " + std::to_string(r.divisor.first) + " and " + std::to_string(r.divisor.second) +
                     " share an update instant";
  }
  r.weight_guidance = weight_guidance(s);
  return r;
}

}  // namespace uavage::bounds
