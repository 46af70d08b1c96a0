#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "uavage/mdp_env.hpp"
#include "uavage/scenario.hpp"

namespace uavage::agents {

struct Rollout {
  SchedulePolicy policy;
  double objective = 1.0;
  StateMatrix state;
  std::vector<StateMatrix> states;  // S_0 .. S_n
  std::vector<Transition> transitions;
};

/// Draws node m with probability lambda_m.
int sample_node(const Scenario& s, std::mt19937_64& rng);

/// Keeps appending lambda-sampled nodes until the first infeasible append; never terminates voluntarily.
Rollout weight_based_rollout(const Scenario& s, std::uint64_t seed, const EnvOptions& env = {});

/// Uniform over all actions 0..M, including termination.
Rollout uniform_random_rollout(const Scenario& s, std::uint64_t seed, const EnvOptions& env = {});

}  // namespace uavage::agents
