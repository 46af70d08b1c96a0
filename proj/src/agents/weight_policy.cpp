#include "uavage/agents/weight_policy.hpp"

namespace uavage::agents {

int sample_node(const Scenario& s, std::mt19937_64& rng) {
  std::vector<double> w;
  for (const auto& n : s.nodes) w.push_back(n.weight);
  std::discrete_distribution<int> pick(w.begin(), w.end());
  return pick(rng) + 1;
}

namespace {

template <class Choose>
Rollout run(const Scenario& s, const EnvOptions& options, Choose&& choose) {
  SchedulingEnv env(s, options);
  Rollout r;
  r.states.push_back(env.state());
  while (!env.terminal()) {
    Transition t = env.step(choose());
    if (!t.infeasible && t.action != 0) r.states.push_back(t.next_state);
    r.transitions.push_back(std::move(t));
  }
  r.policy = env.policy();
  r.objective = env.objective();
  r.state = env.state();
  return r;
}

}  // namespace

Rollout weight_based_rollout(const Scenario& s, std::uint64_t seed, const EnvOptions& env) {
  std::mt19937_64 rng(seed);
  return run(s, env, [&] { return sample_node(s, rng); });
}

Rollout uniform_random_rollout(const Scenario& s, std::uint64_t seed, const EnvOptions& env) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, s.node_count());
  return run(s, env, [&] { return pick(rng); });
}

}  // namespace uavage::agents
