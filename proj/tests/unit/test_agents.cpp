#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>

#include "../support/oracles.hpp"
#include "uavage/agents/autoencoder.hpp"
#include "uavage/agents/dqn.hpp"
#include "uavage/agents/replay.hpp"
#include "uavage/agents/state_repr.hpp"
#include "uavage/agents/weight_policy.hpp"
#include "uavage/bounds.hpp"
#include "uavage/neural/gradcheck.hpp"

using namespace uavage;
using namespace uavage::agents;
namespace fs = std::filesystem;

namespace {

Scenario instance(std::uint64_t seed, int M, double speed, int max_n = 4) {
  GenerationOptions go;
  go.uav.vmax_x = go.uav.vmax_y = speed;
  Scenario s = generate_scenario(M, seed, go);
  std::mt19937_64 rng(seed * 3 + 2);
  for (auto& n : s.nodes) n.battery = oracle::battery_for(s, 1 + static_cast<int>(rng() % max_n));
  return s;
}

EnvOptions cached() {
  EnvOptions o;
  o.cache = std::make_shared<SolveCache>();
  return o;
}

}  // namespace

TEST_CASE("weight-based sampling frequencies") {
  Scenario s = instance(1, 3, 10.0);
  s.nodes[0].weight = 0.2;
  s.nodes[1].weight = 0.3;
  s.nodes[2].weight = 0.5;
  std::mt19937_64 rng(42);
  const int draws = 10000;
  std::vector<int> hits(3, 0);
  for (int k = 0; k < draws; ++k) ++hits[sample_node(s, rng) - 1];
  for (int m = 0; m < 3; ++m) {
    const double p = s.nodes[m].weight;
    const double sigma = std::sqrt(draws * p * (1 - p));
    CHECK(std::abs(hits[m] - draws * p) <= 3 * sigma);
  }
}

TEST_CASE("weight-based rollout") {
  const Scenario one = instance(2, 1, 10.0);
  const auto r = weight_based_rollout(one, 7);
  for (int v : r.policy.order) CHECK(v == 1);
  CHECK(static_cast<int>(r.policy.size()) <= bounds::max_updates(one, 1));
  CHECK(r.states.size() == r.policy.size() + 1);
  CHECK(r.states.back() == r.state);

  Scenario two = instance(3, 2, 10.0);
  two.nodes[0].weight = 1.0;
  two.nodes[1].weight = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (int v : weight_based_rollout(two, seed).policy.order) CHECK(v == 1);

  const Scenario three = instance(4, 3, 6.0);
  const auto a = weight_based_rollout(three, 11);
  const auto b = weight_based_rollout(three, 11);
  CHECK(a.policy == b.policy);
  CHECK(a.objective == b.objective);
}

TEST_CASE("replay memory") {
  ReplayMemory mem(5);
  for (int i = 0; i < 8; ++i) mem.push({Eigen::VectorXd::Constant(1, i), i, 0.0, Eigen::VectorXd::Zero(1), false});
  CHECK(mem.size() == 5);
  std::set<int> stored;
  for (std::size_t i = 0; i < mem.size(); ++i) stored.insert(mem.at(i).action);
  CHECK(stored == std::set<int>{3, 4, 5, 6, 7});

  std::mt19937_64 r1(1), r2(1);
  const auto s1 = mem.sample(3, r1);
  const auto s2 = mem.sample(3, r2);
  REQUIRE(s1.size() == 3);
  std::set<const Experience*> distinct(s1.begin(), s1.end());
  CHECK(distinct.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s1[i] == s2[i]);
  CHECK(mem.sample(50, r1).size() == 5);
}

TEST_CASE("state normalization and last-column view") {
  const Scenario s = instance(5, 3, 8.0);
  const auto r = weight_based_rollout(s, 3);
  const Eigen::MatrixXd n = normalize_state(s, r.state);
  CHECK(n.minCoeff() >= 0.0);
  CHECK(n.maxCoeff() <= 1.0);
  CHECK((denormalize_state(s, n).data - r.state.data).cwiseAbs().maxCoeff() <= 1e-12);

  const StateRepr repr;
  CHECK(repr.mode() == ReprMode::last_column);
  CHECK(repr.size(s) == 4);
  CHECK(repr.encode(s, r.state) == n.col(n.cols() - 1));
}

TEST_CASE("untrained zero network terminates at once") {
  const Scenario s = instance(6, 2, 8.0);
  DqnConfig cfg;
  cfg.zero_init = true;
  std::mt19937_64 rng(0);
  const QAgent agent = make_agent(3, 3, cfg, rng);
  const auto g = greedy_evaluate(agent, s);
  CHECK(g.policy.empty());
  CHECK(g.objective == 1.0);
  CHECK(agent.greedy_action(Eigen::Vector3d(0.3, 0.2, 0.1)) == 0);
}

TEST_CASE("bellman targets") {
  neural::DenseNet net({2, 3}, {neural::Activation::identity});
  net.layers[0].bias << 1.0, 5.0, 2.0;
  const Experience terminal{Eigen::Vector2d(1, 0), 1, 0.75, Eigen::Vector2d(0, 1), true};
  CHECK(bellman_target(net, terminal, 1.0) == 0.75);
  Experience going = terminal;
  going.terminal = false;
  CHECK(bellman_target(net, going, 1.0) == 5.75);
  CHECK(bellman_target(net, going, 0.5) == 3.25);
}

TEST_CASE("epsilon schedule") {
  DqnConfig cfg;
  CHECK(epsilon_at(cfg, 0, 100) == 1.0);
  CHECK(epsilon_at(cfg, 30, 100) == doctest::Approx(0.51));
  CHECK(epsilon_at(cfg, 60, 100) == doctest::Approx(0.02));
  CHECK(epsilon_at(cfg, 99, 100) == doctest::Approx(0.02));
  double prev = 2.0;
  for (int e = 0; e < 100; ++e) {
    CHECK(epsilon_at(cfg, e, 100) <= prev);
    prev = epsilon_at(cfg, e, 100);
  }
}

TEST_CASE("training is reproducible and greedy evaluation is consistent") {
  const Scenario s = instance(7, 2, 6.0, 3);
  DqnConfig cfg;
  cfg.hidden = 16;
  const EnvOptions env = cached();
  const auto a = dqn_train(s, cfg, 150, 99, {}, env);
  const auto b = dqn_train(s, cfg, 150, 99, {}, env);
  REQUIRE(a.curve.size() == 150);
  for (std::size_t i = 0; i < a.curve.size(); ++i) CHECK(a.curve[i].ret == b.curve[i].ret);
  QAgent ca = a.agent, cb = b.agent;
  CHECK(neural::collect(ca.net.parameters()) == neural::collect(cb.net.parameters()));

  const auto g1 = greedy_evaluate(a.agent, s, {}, env);
  const auto g2 = greedy_evaluate(a.agent, s, {}, env);
  CHECK(g1.policy == g2.policy);
  const TrajectorySolution sol = solve_schedule(s, g1.policy);
  CHECK(std::abs(g1.objective - physics::nwaoi(s, sol.per_node_times(s.node_count()))) <= 1e-12);

  const fs::path dir = fs::temp_directory_path() / "uavage_tests";
  fs::create_directories(dir);
  a.agent.save(dir / "agent.ckpt");
  const QAgent back = QAgent::load(dir / "agent.ckpt");
  const Eigen::Vector3d probe(0.5, 0.25, 0.1);
  CHECK(back.q_values(probe) == a.agent.q_values(probe));
  CHECK(back.config.hidden == 16);
}

TEST_CASE("pure exploration matches the uniform random policy") {
  const Scenario s = instance(8, 2, 6.0, 3);
  const EnvOptions env = cached();
  DqnConfig cfg;
  cfg.hidden = 8;
  cfg.epsilon_start = cfg.epsilon_end = 1.0;
  const int episodes = 500;
  const auto trained = dqn_train(s, cfg, episodes, 5, {}, env);
  double sum_a = 0, sq_a = 0, sum_b = 0, sq_b = 0;
  for (int e = 0; e < episodes; ++e) {
    const double ra = trained.curve[e].ret;
    const double rb = 1.0 - uniform_random_rollout(s, 1000 + e, env).objective;
    sum_a += ra;
    sq_a += ra * ra;
    sum_b += rb;
    sq_b += rb * rb;
  }
  const double ma = sum_a / episodes, mb = sum_b / episodes;
  const double va = sq_a / episodes - ma * ma, vb = sq_b / episodes - mb * mb;
  CHECK(std::abs(ma - mb) <= 3.0 * std::sqrt((va + vb) / episodes));
}

TEST_CASE("divergence guard") {
  const Scenario s = instance(9, 1, 10.0);
  DqnConfig cfg;
  cfg.hidden = 8;
  cfg.optimizer.lr = 1e3;
  cfg.updates_per_episode = 4;
  CHECK_THROWS_AS(dqn_train(s, cfg, 400, 1, {}, cached()), DivergenceError);
}

TEST_CASE("autoencoder basics") {
  CHECK_THROWS_AS(autoencoder_train(instance(1, 2, 5.0), 3, 3, {}, 1, 0), EmptyCorpusError);

  const Scenario s = instance(10, 2, 8.0);
  Autoencoder ae(3, 4, 4);
  std::mt19937_64 rng(1);
  ae.init(rng);
  const Eigen::MatrixXd s0 = normalize_state(s, initial_state(s));
  const Eigen::VectorXd e1 = ae.encode(s0);
  CHECK(e1.size() == 8);
  CHECK(ae.encode(s0) == e1);
  // The encoder's last input is always column 0, so a one-step pass depends only on it.
  Autoencoder pad(3, 6, 4);
  pad.encoder = ae.encoder;
  const Eigen::VectorXd e2 = pad.encode(s0);
  CHECK(e2.head(4) == e1.head(4));
  CHECK(e2.segment(4, 2).isZero());
  CHECK(e2.tail(4) == e1.tail(4));
}

TEST_CASE("autoencoder gradient matches finite differences") {
  const Scenario s = instance(11, 2, 8.0);
  const auto r = weight_based_rollout(s, 2);
  REQUIRE(r.state.columns() >= 2);
  const Eigen::MatrixXd x = normalize_state(s, r.state);
  Autoencoder ae(3, 3, 3);
  std::mt19937_64 rng(4);
  ae.init(rng);
  Autoencoder grad = ae.zeros_like();
  ae.loss_and_gradient(x, grad);
  auto loss = [&] { return ae.loss(x); };
  const auto check = neural::gradient_check(ae.parameters(), loss, neural::flatten(grad.parameters()));
  CHECK(check.max_rel_error <= 1e-5);
}

TEST_CASE("autoencoder overfits a single state") {
  const Scenario s = instance(12, 2, 8.0);
  const auto r = weight_based_rollout(s, 5);
  const std::vector<StateMatrix> corpus(10, r.state);
  AutoencoderConfig cfg;
  cfg.optimizer.kind = neural::OptimizerKind::adam;
  cfg.optimizer.lr = 1e-2;
  cfg.batch = 10;
  const auto res = autoencoder_train(s, 8, 8, corpus, 400, 3, cfg);
  CHECK(res.test_mse < 1e-3);
}

TEST_CASE("autoencoder training loss trends down at small step size") {
  const Scenario s = instance(13, 3, 8.0);
  const auto corpus = collect_corpus(s, 20, 1, 0, cached());
  AutoencoderConfig cfg;
  cfg.optimizer.lr = 1e-2;
  const auto res = autoencoder_train(s, 4, 4, corpus, 40, 2, cfg);
  REQUIRE(res.epoch_loss.size() == 40);
  int rises = 0;
  for (std::size_t e = 1; e < res.epoch_loss.size(); ++e) rises += res.epoch_loss[e] > res.epoch_loss[e - 1];
  CHECK(rises == 0);
  CHECK(res.epoch_loss.back() < res.epoch_loss.front());
  CHECK(res.train_size + res.test_size == corpus.size());
}

TEST_CASE("hyperparameter search") {
  const Scenario s = instance(14, 2, 8.0);
  SearchConfig cfg;
  cfg.epochs = 5;
  cfg.env = cached();
  const auto single = autoencoder_hyperparam_search(s, {3}, {3}, 10, 1, cfg);
  CHECK(single.k_c == 3);
  CHECK(single.k_h == 3);

  const auto a = autoencoder_hyperparam_search(s, {2, 4, 6}, {2, 4, 6}, 10, 2, cfg);
  const auto b = autoencoder_hyperparam_search(s, {2, 4, 6}, {2, 4, 6}, 10, 2, cfg);
  CHECK(a.k_c == b.k_c);
  CHECK(a.k_h == b.k_h);
  CHECK(a.grid.size() == 3);
  CHECK((a.k_c == 2 || a.k_c == 4 || a.k_c == 6));

  cfg.joint = false;
  const auto full = autoencoder_hyperparam_search(s, {2, 4}, {3, 5}, 10, 2, cfg);
  CHECK(full.grid.size() == 4);
  for (const auto& p : full.grid)
    if (p.k_c == full.k_c && p.k_h == full.k_h) CHECK(p.test_mse == full.test_mse);
}

TEST_CASE("autoencoder representation feeds the agent") {
  const Scenario s = instance(15, 2, 8.0);
  auto ae = std::make_shared<Autoencoder>(3, 5, 5);
  std::mt19937_64 rng(3);
  ae->init(rng);
  const StateRepr repr(ae);
  CHECK(repr.mode() == ReprMode::autoencoder);
  CHECK(repr.size(s) == 10);
  const auto r = weight_based_rollout(s, 1);
  CHECK(repr.encode(s, r.state) == ae->encode(normalize_state(s, r.state)));

  const fs::path dir = fs::temp_directory_path() / "uavage_tests";
  fs::create_directories(dir);
  ae->save(dir / "ae.ckpt");
  const Autoencoder back = Autoencoder::load(dir / "ae.ckpt");
  CHECK(back.encode(normalize_state(s, r.state)) == ae->encode(normalize_state(s, r.state)));
}
