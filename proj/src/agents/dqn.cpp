#include "uavage/agents/dqn.hpp"

#include <algorithm>
#include <cmath>

#include "uavage/neural/params.hpp"

namespace uavage::agents {

SchedulingTask::SchedulingTask(const Scenario& s, StateRepr repr, EnvOptions options)
    : env_(s, std::move(options)), repr_(std::move(repr)) {}

Eigen::VectorXd SchedulingTask::reset() { return repr_.encode(env_.scenario(), env_.reset()); }

EnvStep SchedulingTask::step(int action) {
  const Transition t = env_.step(action);
  return {repr_.encode(env_.scenario(), t.next_state), t.reward, t.terminal};
}

int QAgent::greedy_action(const Eigen::VectorXd& observation) const {
  const Eigen::VectorXd q = q_values(observation);
  int best = 0;
  for (int a = 1; a < q.size(); ++a)
    if (q[a] > q[best]) best = a;
  return best;
}

void QAgent::save(const std::filesystem::path& path, const nlohmann::json& meta) const {
  neural::DenseNet copy = net;
  nlohmann::json m = meta;
  m["kind"] = "q_network";
  m["sizes"] = net.sizes();
  std::vector<std::string> acts;
  for (const auto& l : net.layers) acts.push_back(neural::to_string(l.activation));
  m["activations"] = acts;
  m["hidden"] = config.hidden;
  m["gamma"] = config.gamma;
  m["optimizer"] = neural::to_string(config.optimizer.kind);
  m["lr"] = config.optimizer.lr;
  m["batch"] = config.batch;
  m["replay_capacity"] = config.replay_capacity;
  m["updates_per_episode"] = config.updates_per_episode;
  m["epsilon_start"] = config.epsilon_start;
  m["epsilon_end"] = config.epsilon_end;
  m["epsilon_decay_fraction"] = config.epsilon_decay_fraction;
  m["eval_interval"] = config.eval_interval;
  neural::save_checkpoint(path, neural::collect(copy.parameters("q")), m);
}

QAgent QAgent::load(const std::filesystem::path& path) {
  const auto ck = neural::load_checkpoint(path);
  if (ck.meta.value("kind", "") != "q_network") throw neural::CheckpointError("not a Q-network checkpoint");
  std::vector<neural::Activation> acts;
  for (const auto& a : ck.meta.at("activations")) acts.push_back(neural::activation_from_string(a.get<std::string>()));
  QAgent agent;
  agent.net = neural::DenseNet(ck.meta.at("sizes").get<std::vector<int>>(), acts);
  neural::apply(ck.params, agent.net.parameters("q"));
  auto& c = agent.config;
  c.hidden = ck.meta.value("hidden", c.hidden);
  c.gamma = ck.meta.value("gamma", c.gamma);
  c.optimizer.kind = neural::optimizer_from_string(ck.meta.value("optimizer", std::string("sgd")));
  c.optimizer.lr = ck.meta.value("lr", c.optimizer.lr);
  c.batch = ck.meta.value("batch", c.batch);
  c.replay_capacity = ck.meta.value("replay_capacity", c.replay_capacity);
  c.updates_per_episode = ck.meta.value("updates_per_episode", c.updates_per_episode);
  c.epsilon_start = ck.meta.value("epsilon_start", c.epsilon_start);
  c.epsilon_end = ck.meta.value("epsilon_end", c.epsilon_end);
  c.epsilon_decay_fraction = ck.meta.value("epsilon_decay_fraction", c.epsilon_decay_fraction);
  c.eval_interval = ck.meta.value("eval_interval", c.eval_interval);
  return agent;
}

QAgent make_agent(int observation_size, int action_count, const DqnConfig& config, std::mt19937_64& rng) {
  QAgent agent;
  agent.config = config;
  if (config.hidden > 0)
    agent.net = neural::DenseNet({observation_size, config.hidden, action_count},
                                 {config.hidden_activation, neural::Activation::identity});
  else
    agent.net = neural::DenseNet({observation_size, action_count}, {neural::Activation::identity});
  if (!config.zero_init) agent.net.init(rng);
  return agent;
}

double epsilon_at(const DqnConfig& c, int episode, int episodes) {
  const double span = c.epsilon_decay_fraction * static_cast<double>(episodes);
  const double frac = span > 0.0 ? std::min(1.0, static_cast<double>(episode) / span) : 1.0;
  return c.epsilon_start + (c.epsilon_end - c.epsilon_start) * frac;
}

DivergenceError::DivergenceError(int e, double l)
    : std::runtime_error("training diverged at episode " + std::to_string(e) + " (loss " + std::to_string(l) + ")"),
      episode(e),
      loss(l) {}

double bellman_target(const neural::DenseNet& target, const Experience& e, double gamma) {
  if (e.terminal) return e.reward;
  return e.reward + gamma * target.forward(e.next_state).maxCoeff();
}

namespace {

double greedy_return(EpisodicEnv& env, const QAgent& agent, int max_steps) {
  Eigen::VectorXd obs = env.reset();
  double ret = 0.0;
  for (int k = 0; k < max_steps; ++k) {
    EnvStep st = env.step(agent.greedy_action(obs));
    ret += st.reward;
    if (st.terminal) break;
    obs = std::move(st.observation);
  }
  return ret;
}

}  // namespace

TrainResult dqn_train(EpisodicEnv& env, const DqnConfig& config, int episodes, std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("dqn_train: need at least one episode");
  std::mt19937_64 rng(seed);
  TrainResult res;
  res.agent = make_agent(env.observation_size(), env.action_count(), config, rng);
  ReplayMemory memory(config.replay_capacity);
  neural::Optimizer opt(config.optimizer);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> any_action(0, env.action_count() - 1);
  neural::DenseNet best_net = res.agent.net;

  for (int ep = 0; ep < episodes; ++ep) {
    const double eps = epsilon_at(config, ep, episodes);
    EpisodeRecord rec;
    rec.episode = ep;
    rec.epsilon = eps;
    Eigen::VectorXd obs = env.reset();
    for (int k = 0; k < config.max_steps; ++k) {
      const int a = coin(rng) < eps ? any_action(rng) : res.agent.greedy_action(obs);
      EnvStep st = env.step(a);
      rec.ret += st.reward;
      ++rec.length;
      memory.push({obs, a, st.reward, st.observation, st.terminal});
      obs = std::move(st.observation);
      if (st.terminal) break;
    }
    rec.objective = env.episode_objective();

    const neural::DenseNet target = res.agent.net;
    double loss_sum = 0.0;
    for (int u = 0; u < config.updates_per_episode; ++u) {
      const auto batch = memory.sample(config.batch, rng);
      neural::DenseNet grad = res.agent.net.zeros_like();
      neural::DenseNet::Cache cache;
      double loss = 0.0;
      const double inv = 1.0 / static_cast<double>(batch.size());
      for (const Experience* e : batch) {
        const double y = bellman_target(target, *e, config.gamma);
        const Eigen::VectorXd q = res.agent.net.forward(e->state, cache);
        const double diff = q[e->action] - y;
        loss += 0.5 * diff * diff * inv;
        Eigen::VectorXd g = Eigen::VectorXd::Zero(q.size());
        g[e->action] = diff * inv;
        res.agent.net.backward(cache, g, grad);
      }
      if (!std::isfinite(loss) || loss > config.divergence_limit) throw DivergenceError(ep, loss);
      opt.step(res.agent.net.parameters(), grad.parameters());
      loss_sum += loss;
    }
    rec.loss = config.updates_per_episode > 0 ? loss_sum / config.updates_per_episode : 0.0;
    res.curve.push_back(rec);

    if (config.eval_interval > 0 && ((ep + 1) % config.eval_interval == 0 || ep + 1 == episodes)) {
      const double r = greedy_return(env, res.agent, config.max_steps);
      // Strict improvement only, so the earliest network reaching the best return is kept.
      if (r > res.best_eval_return) {
        res.best_eval_return = r;
        res.best_eval_episode = ep;
        best_net = res.agent.net;
      }
    }
  }
  if (config.eval_interval > 0) res.agent.net = std::move(best_net);
  return res;
}

TrainResult dqn_train(const Scenario& s, const DqnConfig& config, int episodes, std::uint64_t seed,
                      const StateRepr& repr, const EnvOptions& env) {
  SchedulingTask task(s, repr, env);
  return dqn_train(task, config, episodes, seed);
}

GreedyResult greedy_evaluate(const QAgent& agent, const Scenario& s, const StateRepr& repr, const EnvOptions& options) {
  SchedulingEnv env(s, options);
  GreedyResult res;
  for (int k = 0; k < agent.config.max_steps && !env.terminal(); ++k) {
    const int a = agent.greedy_action(repr.encode(s, env.state()));
    res.transitions.push_back(env.step(a));
  }
  res.policy = env.policy();
  res.objective = env.objective();
  return res;
}

}  // namespace uavage::agents
