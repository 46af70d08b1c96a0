#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "uavage/agents/replay.hpp"
#include "uavage/agents/state_repr.hpp"
#include "uavage/mdp_env.hpp"
#include "uavage/neural/dense.hpp"
#include "uavage/neural/optimizer.hpp"

namespace uavage::agents {

struct EnvStep {
  Eigen::VectorXd observation;
  double reward = 0.0;
  bool terminal = false;
};

/// Minimal episodic environment the learner talks to.
class EpisodicEnv {
 public:
  virtual ~EpisodicEnv() = default;
  virtual Eigen::VectorXd reset() = 0;
  virtual EnvStep step(int action) = 0;
  virtual int action_count() const = 0;
  virtual int observation_size() const = 0;
  /// Task-specific score of the finished episode (NaN if none).
  virtual double episode_objective() const { return std::numeric_limits<double>::quiet_NaN(); }
};

/// SchedulingEnv seen through a StateRepr.
class SchedulingTask : public EpisodicEnv {
 public:
  SchedulingTask(const Scenario& s, StateRepr repr = {}, EnvOptions options = {});

  Eigen::VectorXd reset() override;
  EnvStep step(int action) override;
  int action_count() const override { return env_.action_count(); }
  int observation_size() const override { return repr_.size(env_.scenario()); }
  double episode_objective() const override { return env_.objective(); }

  const SchedulingEnv& env() const { return env_; }

 private:
  SchedulingEnv env_;
  StateRepr repr_;
};

struct DqnConfig {
  int hidden = 64;  // 0 = single linear layer (tabular limit with one-hot inputs)
  neural::Activation hidden_activation = neural::Activation::relu;
  double epsilon_start = 1.0;
  double epsilon_end = 0.02;
  double epsilon_decay_fraction = 0.6;  // share of episodes spent decaying
  double gamma = 1.0;
  std::size_t replay_capacity = 10000;
  std::size_t batch = 32;
  int updates_per_episode = 1;
  neural::OptimizerConfig optimizer;  // SGD, lr 1e-3
  double divergence_limit = 1e6;
  int max_steps = 10000;  // per episode
  bool zero_init = false;
  // Greedy rollout every this many episodes; the best-scoring network is returned. 0 = off.
  int eval_interval = 0;
};

struct QAgent {
  neural::DenseNet net;
  DqnConfig config;

  Eigen::VectorXd q_values(const Eigen::VectorXd& observation) const { return net.forward(observation); }
  /// argmax, lowest index on ties.
  int greedy_action(const Eigen::VectorXd& observation) const;

  void save(const std::filesystem::path& path, const nlohmann::json& meta = {}) const;
  static QAgent load(const std::filesystem::path& path);
};

QAgent make_agent(int observation_size, int action_count, const DqnConfig& config, std::mt19937_64& rng);

/// Linear decay from epsilon_start to epsilon_end over the first fraction of episodes.
double epsilon_at(const DqnConfig& config, int episode, int episodes);

struct EpisodeRecord {
  int episode = 0;
  double ret = 0.0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double epsilon = 0.0;
  double loss = 0.0;  // mean over this episode's gradient steps
  int length = 0;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int episode, double loss);
  int episode;
  double loss;
};

/// Target y = r for terminal samples, r + gamma * max_a' Q_target(s', a') otherwise.
double bellman_target(const neural::DenseNet& target, const Experience& e, double gamma);

struct TrainResult {
  QAgent agent;
  std::vector<EpisodeRecord> curve;
  double best_eval_return = -std::numeric_limits<double>::infinity();  // only with eval_interval > 0
  int best_eval_episode = -1;
};

/// Epsilon-greedy episodes; after each one, `updates_per_episode` minibatch steps on
/// 0.5 (y - Q)^2 with targets from the network as it stood when the episode began.
/// With eval_interval > 0 the returned agent is the snapshot with the best greedy return.
TrainResult dqn_train(EpisodicEnv& env, const DqnConfig& config, int episodes, std::uint64_t seed);
TrainResult dqn_train(const Scenario& s, const DqnConfig& config, int episodes, std::uint64_t seed,
                      const StateRepr& repr = {}, const EnvOptions& env = {});

struct GreedyResult {
  SchedulePolicy policy;
  double objective = 1.0;
  std::vector<Transition> transitions;
};

/// Epsilon = 0 rollout.
GreedyResult greedy_evaluate(const QAgent& agent, const Scenario& s, const StateRepr& repr = {},
                             const EnvOptions& env = {});

}  // namespace uavage::agents
