#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <numeric>
#include <thread>

#include "output.hpp"
#include "uavage/agents/autoencoder.hpp"
#include "uavage/agents/dqn.hpp"
#include "uavage/agents/weight_policy.hpp"
#include "uavage/bounds.hpp"
#include "uavage/enumerator.hpp"
#include "uavage/neural/params.hpp"
#include "uavage/physics.hpp"

using namespace uavage;
using namespace uavage::cli;

namespace {

enum Exit { kOk = 0, kUsage = 1, kSolver = 2, kMissing = 3, kBudget = 4 };

struct MissingArtifact : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Scenario read_scenario(const std::string& path) {
  if (!fs::exists(path)) throw MissingArtifact("scenario not found: " + path);
  return load_scenario(path);
}

struct DqnFlags {
  int episodes = 2000;
  agents::DqnConfig config;
  std::string optimizer = "sgd";
  std::string activation = "relu";

  void add(CLI::App* app) {
    app->add_option("--episodes", episodes, "Training episodes")->check(CLI::PositiveNumber);
    app->add_option("--hidden", config.hidden, "Hidden width (0 = linear)")->check(CLI::NonNegativeNumber);
    app->add_option("--activation", activation, "Hidden activation")
        ->check(CLI::IsMember({"relu", "tanh", "sigmoid", "identity"}));
    app->add_option("--optimizer", optimizer, "sgd | momentum | adam")->check(CLI::IsMember({"sgd", "momentum", "adam"}));
    app->add_option("--lr", config.optimizer.lr, "Learning rate")->check(CLI::PositiveNumber);
    app->add_option("--batch", config.batch, "Minibatch size")->check(CLI::PositiveNumber);
    app->add_option("--updates", config.updates_per_episode, "Gradient steps per episode")->check(CLI::NonNegativeNumber);
    app->add_option("--replay", config.replay_capacity, "Replay capacity")->check(CLI::PositiveNumber);
    app->add_option("--epsilon-end", config.epsilon_end, "Final exploration rate")->check(CLI::Range(0.0, 1.0));
    app->add_option("--eval-interval", config.eval_interval, "Greedy check every N episodes, keep best (0 = off)")
        ->check(CLI::NonNegativeNumber);
  }
  agents::DqnConfig resolved() const {
    agents::DqnConfig c = config;
    c.optimizer.kind = neural::optimizer_from_string(optimizer);
    c.hidden_activation = neural::activation_from_string(activation);
    return c;
  }
  json to_json() const {
    const auto c = resolved();
    return {{"episodes", episodes},           {"hidden", c.hidden},
            {"activation", activation},       {"optimizer", optimizer},
            {"lr", c.optimizer.lr},           {"batch", c.batch},
            {"updates_per_episode", c.updates_per_episode},
            {"replay_capacity", c.replay_capacity},
            {"epsilon_start", c.epsilon_start}, {"epsilon_end", c.epsilon_end},
            {"epsilon_decay_fraction", c.epsilon_decay_fraction},
            {"gamma", c.gamma},               {"eval_interval", c.eval_interval}};
  }
};

struct AutoencoderFlags {
  std::vector<int> k{8};
  std::vector<int> k_h;  // empty = joint search over k
  int episodes = 200;
  int epochs = 30;
  std::size_t max_states = 500;
  std::string optimizer = "sgd";
  double lr = 1e-3;

  void add(CLI::App* app) {
    app->add_option("--k", k, "Cell sizes to search (joint with hidden size)")->expected(1, -1);
    app->add_option("--k-h", k_h, "Separate hidden sizes (disables the joint search)")->expected(1, -1);
    app->add_option("--ae-episodes", episodes, "Weight-based rollouts for the corpus")->check(CLI::PositiveNumber);
    app->add_option("--epochs", epochs, "Training epochs per grid point")->check(CLI::PositiveNumber);
    app->add_option("--max-states", max_states, "Corpus size cap (0 = none)");
    app->add_option("--ae-optimizer", optimizer, "sgd | momentum | adam")->check(CLI::IsMember({"sgd", "momentum", "adam"}));
    app->add_option("--ae-lr", lr, "Autoencoder learning rate")->check(CLI::PositiveNumber);
  }
  agents::SearchConfig search(const EnvOptions& env) const {
    agents::SearchConfig c;
    c.train.optimizer.kind = neural::optimizer_from_string(optimizer);
    c.train.optimizer.lr = lr;
    c.epochs = epochs;
    c.joint = k_h.empty();
    c.max_states = max_states;
    c.env = env;
    return c;
  }
  json to_json() const {
    return {{"k", k}, {"k_h", k_h}, {"episodes", episodes}, {"epochs", epochs},
            {"max_states", max_states}, {"optimizer", optimizer}, {"lr", lr}};
  }
};

EnvOptions cached_env() {
  EnvOptions o;
  o.cache = std::make_shared<SolveCache>();
  return o;
}

void write_learning_curve(const fs::path& p, const std::vector<agents::EpisodeRecord>& curve) {
  std::ofstream out(p);
  out << std::setprecision(12) << "episode,return,nwaoi,epsilon,loss,length\n";
  for (const auto& r : curve)
    out << r.episode << ',' << r.ret << ',' << r.objective << ',' << r.epsilon << ',' << r.loss << ',' << r.length << '\n';
}

json policy_result(const Scenario& s, const SchedulePolicy& u, double objective) {
  return {{"policy", u.order}, {"policy_text", format_policy(u)}, {"nwaoi", objective},
          {"g_min", bounds::lower_bound(s)}, {"node_count", s.node_count()}};
}

// --- commands ---------------------------------------------------------------

int cmd_generate(int nodes, std::uint64_t seed, const GenerationOptions& go, const std::string& out) {
  const Scenario s = generate_scenario(nodes, seed, go);
  const fs::path p(out);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  save_scenario(s, p);
  std::cout << "wrote " << p.string() << " (" << nodes << " nodes, seed " << seed << ")\n";
  return kOk;
}

int cmd_solve(RunRecord& run, const std::string& scenario, const std::string& schedule, int grid) {
  const Scenario s = read_scenario(scenario);
  const SchedulePolicy u = parse_policy(schedule);
  run.config() = {{"scenario", scenario}, {"schedule", schedule}, {"aoi_grid", grid}};
  const auto sol = solve_schedule(s, u);
  json doc = to_json(sol);
  doc["g_min"] = bounds::lower_bound(s);
  if (sol.feasible()) {
    const auto check = verify_solution(s, sol);
    doc["check"] = {{"feasible", check.feasible()},
                    {"max_energy_excess_rel", check.max_energy_excess_rel},
                    {"max_speed_excess_m", check.max_speed_excess},
                    {"stationarity", check.stationarity}};
    write_trajectory_csv(run.file("trajectory.csv"), s, sol);
    write_aoi_csv(run.file("aoi_trace.csv"), s, sol, grid);
  }
  write_json(run.file("solution.json"), doc);
  run.write_manifest({{"status", to_string(sol.status)}, {"nwaoi", sol.objective}});
  std::cout << "status " << to_string(sol.status) << ", NWAoI " << sol.objective << '\n';
  return sol.feasible() ? kOk : kSolver;
}

int cmd_bounds(RunRecord& run, const std::string& scenario) {
  const Scenario s = read_scenario(scenario);
  run.config() = {{"scenario", scenario}};
  const auto r = bounds::report(s);
  json doc;
  doc["n_bar"] = r.n_bar;
  doc["g_min"] = r.g_min;
  doc["uniform_schedule"] = to_json(r.uniform);
  doc["divisor_condition"] = {{"ok", r.divisor.ok}, {"pair", {r.divisor.first, r.divisor.second}}};
  doc["v_bar_min"] = r.v_bar_min ? json(*r.v_bar_min) : json(nullptr);
  if (!r.v_bar_reason.empty()) doc["v_bar_reason"] = r.v_bar_reason;
  doc["weight_guidance"] = r.weight_guidance;
  write_json(run.file("bounds.json"), doc);
  run.write_manifest({{"g_min", r.g_min}});
  std::cout << "g_min " << r.g_min << ", v_bar_min "
            << (r.v_bar_min ? std::to_string(*r.v_bar_min) : "absent (" + r.v_bar_reason + ")") << '\n';
  return kOk;
}

int cmd_enumerate(RunRecord& run, const std::string& scenario, std::uint64_t budget, int cap, bool include_zero) {
  const Scenario s = read_scenario(scenario);
  enumerator::Options o;
  o.budget = budget;
  o.cap = cap;
  o.include_zero = include_zero;
  run.config() = {{"scenario", scenario}, {"budget", budget}, {"cap", cap}, {"include_zero", include_zero},
                  {"workers", enumerator::default_workers()}};
  const auto r = enumerator::enumerate_optimal(s, o);
  {
    std::ofstream out(run.file("table.csv"));
    out << std::setprecision(12) << "policy,total,status,nwaoi\n";
    for (const auto& e : r.table)
      out << '"' << format_policy(e.policy) << "\"," << e.policy.size() << ',' << to_string(e.status) << ','
          << e.objective << '\n';
  }
  json doc = policy_result(s, r.best_policy, r.best_solution.objective);
  doc["solution"] = to_json(r.best_solution);
  doc["evaluated"] = r.table.size();
  write_json(run.file("enumeration.json"), doc);
  write_trajectory_csv(run.file("trajectory.csv"), s, r.best_solution);
  run.write_manifest({{"best_policy", format_policy(r.best_policy)}, {"nwaoi", r.best_solution.objective}});
  std::cout << "best [" << format_policy(r.best_policy) << "] NWAoI " << r.best_solution.objective << " over "
            << r.table.size() << " schedules\n";
  return kOk;
}

std::shared_ptr<agents::Autoencoder> load_autoencoder(const std::string& path) {
  if (!fs::exists(path)) throw MissingArtifact("autoencoder checkpoint not found: " + path);
  return std::make_shared<agents::Autoencoder>(agents::Autoencoder::load(path));
}

int cmd_train_dqn(RunRecord& run, const std::string& scenario, std::uint64_t seed, const DqnFlags& flags,
                  const std::string& ae_path) {
  const Scenario s = read_scenario(scenario);
  run.set_seed(seed);
  run.config() = flags.to_json();
  run.config()["scenario"] = scenario;
  agents::StateRepr repr;
  if (!ae_path.empty()) {
    repr = agents::StateRepr(load_autoencoder(ae_path));
    run.config()["autoencoder"] = ae_path;
  }
  run.config()["representation"] = agents::to_string(repr.mode());
  const EnvOptions env = cached_env();
  agents::TrainResult tr;
  try {
    tr = agents::dqn_train(s, flags.resolved(), flags.episodes, seed, repr, env);
  } catch (const agents::DivergenceError& e) {
    throw SolverFailure(e.what());
  }
  tr.agent.save(run.file("agent.ckpt"), {{"seed", seed}, {"scenario", scenario}, {"code_version", code_version()}});
  write_learning_curve(run.file("learning_curve.csv"), tr.curve);
  const auto g = agents::greedy_evaluate(tr.agent, s, repr, env);
  {
    std::ofstream log(run.file("replay_log.jsonl"));
    append_replay_log(log, 0, g.transitions);
  }
  json doc = policy_result(s, g.policy, g.objective);
  doc["best_eval_episode"] = tr.best_eval_episode;
  write_json(run.file("greedy.json"), doc);
  run.write_manifest({{"greedy_policy", format_policy(g.policy)}, {"nwaoi", g.objective}});
  std::cout << "greedy [" << format_policy(g.policy) << "] NWAoI " << g.objective << '\n';
  return kOk;
}

int cmd_train_autoencoder(RunRecord& run, const std::string& scenario, std::uint64_t seed, const AutoencoderFlags& f) {
  const Scenario s = read_scenario(scenario);
  run.set_seed(seed);
  run.config() = f.to_json();
  run.config()["scenario"] = scenario;
  const auto k_h = f.k_h.empty() ? f.k : f.k_h;
  const auto r = agents::autoencoder_hyperparam_search(s, f.k, k_h, f.episodes, seed, f.search(cached_env()));
  r.best.model.save(run.file("autoencoder.ckpt"), {{"seed", seed}, {"test_mse", r.test_mse}});
  {
    std::ofstream out(run.file("search.csv"));
    out << std::setprecision(12) << "k_c,k_h,test_mse\n";
    for (const auto& p : r.grid) out << p.k_c << ',' << p.k_h << ',' << p.test_mse << '\n';
  }
  {
    std::ofstream out(run.file("loss_curve.csv"));
    out << std::setprecision(12) << "epoch,train_mse\n";
    for (std::size_t e = 0; e < r.best.epoch_loss.size(); ++e) out << e << ',' << r.best.epoch_loss[e] << '\n';
  }
  write_json(run.file("autoencoder.json"), {{"k_c", r.k_c},
                                            {"k_h", r.k_h},
                                            {"test_mse", r.test_mse},
                                            {"train_mse", r.best.train_mse},
                                            {"corpus_size", r.corpus_size},
                                            {"train_size", r.best.train_size},
                                            {"test_size", r.best.test_size}});
  run.write_manifest({{"k_c", r.k_c}, {"k_h", r.k_h}, {"test_mse", r.test_mse}});
  std::cout << "best (k_c, k_h) = (" << r.k_c << ", " << r.k_h << "), test MSE " << r.test_mse << '\n';
  return kOk;
}

struct PolicyOutcome {
  SchedulePolicy policy;
  double objective = 1.0;
  std::vector<Transition> transitions;
  TrajectorySolution solution;
};

agents::QAgent load_agent(const std::string& path) {
  if (path.empty() || !fs::exists(path)) throw MissingArtifact("agent checkpoint not found: " + path);
  return agents::QAgent::load(path);
}

PolicyOutcome run_policy(const Scenario& s, const std::string& policy, std::uint64_t seed, const std::string& ckpt,
                         const std::string& ae_path, const EnvOptions& env, int enum_workers) {
  PolicyOutcome out;
  if (policy == "enumerate") {
    enumerator::Options o;
    o.workers = enum_workers;
    const auto r = enumerator::enumerate_optimal(s, o);
    out.policy = r.best_policy;
    out.objective = r.best_solution.objective;
    out.solution = r.best_solution;
    return out;
  }
  if (policy == "weight") {
    const auto r = agents::weight_based_rollout(s, seed, env);
    out.policy = r.policy;
    out.objective = r.objective;
    out.transitions = r.transitions;
  } else {
    agents::StateRepr repr;
    if (policy == "dqn-lstm") {
      if (ae_path.empty()) throw CLI::ValidationError("--autoencoder", "required for dqn-lstm");
      repr = agents::StateRepr(load_autoencoder(ae_path));
    }
    const agents::QAgent agent = load_agent(ckpt);
    if (agent.net.input_size() != repr.size(s))
      throw CLI::ValidationError("--checkpoint", "agent expects " + std::to_string(agent.net.input_size()) +
                                                     " inputs but the " + agents::to_string(repr.mode()) +
                                                     " representation gives " + std::to_string(repr.size(s)));
    const auto g = agents::greedy_evaluate(agent, s, repr, env);
    out.policy = g.policy;
    out.objective = g.objective;
    out.transitions = g.transitions;
  }
  out.solution = solve_schedule(s, out.policy);
  return out;
}

int cmd_eval(RunRecord& run, const std::string& scenario, const std::string& policy, std::uint64_t seed,
             const std::string& ckpt, const std::string& ae_path) {
  const Scenario s = read_scenario(scenario);
  run.set_seed(seed);
  run.config() = {{"scenario", scenario}, {"policy", policy}, {"checkpoint", ckpt}, {"autoencoder", ae_path}};
  const auto r = run_policy(s, policy, seed, ckpt, ae_path, cached_env(), enumerator::default_workers());
  json doc = policy_result(s, r.policy, r.objective);
  doc["policy_kind"] = policy;
  doc["solution"] = to_json(r.solution);
  write_json(run.file("evaluation.json"), doc);
  write_trajectory_csv(run.file("trajectory.csv"), s, r.solution);
  {
    std::ofstream log(run.file("replay_log.jsonl"));
    append_replay_log(log, 0, r.transitions);
  }
  run.write_manifest({{"policy", format_policy(r.policy)}, {"nwaoi", r.objective}});
  std::cout << policy << " [" << format_policy(r.policy) << "] NWAoI " << r.objective << '\n';
  return kOk;
}

struct SweepFlags {
  std::string axis;
  std::vector<double> values;
  std::vector<std::string> policies{"enumerate", "weight"};
  int seeds = 50;
  int nodes = 3;
  double battery_lo = 0.1;
  double battery_hi = 1.0;
  std::optional<double> beta0;
  DqnFlags dqn;
  AutoencoderFlags ae;
};

Scenario sweep_cell(const Scenario& tmpl, const SweepFlags& f, double value, std::uint64_t seed) {
  GenerationOptions go;
  go.region = tmpl.region;
  go.channel = tmpl.channel;
  if (f.beta0) go.channel.beta0 = *f.beta0;
  go.uav = tmpl.uav;
  go.battery_lo = f.battery_lo;
  go.battery_hi = f.battery_hi;
  int M = tmpl.nodes.empty() ? f.nodes : tmpl.node_count();
  if (f.axis == "nodes") M = static_cast<int>(value);
  if (f.axis == "energy") {
    go.battery_lo *= value;
    go.battery_hi *= value;
  }
  if (f.axis == "horizon") go.uav.horizon = value;
  if (f.axis == "speed") go.uav.vmax_x = go.uav.vmax_y = value;
  return generate_scenario(M, seed, go);
}

int cmd_sweep(RunRecord& run, const std::string& scenario, std::uint64_t seed, const SweepFlags& f) {
  Scenario tmpl;
  if (!scenario.empty()) tmpl = read_scenario(scenario);
  run.set_seed(seed);
  run.config() = {{"scenario", scenario}, {"axis", f.axis},        {"values", f.values},
                  {"policies", f.policies}, {"seeds", f.seeds},    {"nodes", f.nodes},
                  {"battery_lo", f.battery_lo}, {"battery_hi", f.battery_hi},
                  {"beta0", f.beta0 ? json(*f.beta0) : json(nullptr)},
                  {"dqn", f.dqn.to_json()}, {"autoencoder", f.ae.to_json()}};

  struct Cell {
    std::size_t value, policy;
    int seed;
    double objective = NAN, g_min = NAN;
    std::string error;
  };
  std::vector<Cell> cells;
  for (std::size_t v = 0; v < f.values.size(); ++v)
    for (std::size_t p = 0; p < f.policies.size(); ++p)
      for (int k = 0; k < f.seeds; ++k) cells.push_back({v, p, k, NAN, NAN, {}});

  std::atomic<std::size_t> next{0};
  std::mutex budget_mu;
  std::exception_ptr budget_error;
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      Cell& c = cells[i];
      const std::uint64_t cell_seed = seed * 1000003ULL + static_cast<std::uint64_t>(c.seed);
      // Geometry depends on the seed only, so every axis value sees the same instances.
      const Scenario s = sweep_cell(tmpl, f, f.values[c.value], cell_seed);
      c.g_min = bounds::lower_bound(s);
      const std::string& pol = f.policies[c.policy];
      const EnvOptions env = cached_env();
      try {
        if (pol == "dqn" || pol == "dqn-lstm") {
          agents::StateRepr repr;
          if (pol == "dqn-lstm") {
            const auto k_h = f.ae.k_h.empty() ? f.ae.k : f.ae.k_h;
            const auto r = agents::autoencoder_hyperparam_search(s, f.ae.k, k_h, f.ae.episodes, cell_seed, f.ae.search(env));
            repr = agents::StateRepr(std::make_shared<agents::Autoencoder>(r.best.model));
          }
          const auto tr = agents::dqn_train(s, f.dqn.resolved(), f.dqn.episodes, cell_seed, repr, env);
          c.objective = agents::greedy_evaluate(tr.agent, s, repr, env).objective;
        } else {
          c.objective = run_policy(s, pol, cell_seed, "", "", env, 1).objective;
        }
      } catch (const enumerator::BudgetExceeded& e) {
        std::lock_guard<std::mutex> lock(budget_mu);
        if (!budget_error) budget_error = std::current_exception();
      } catch (const std::exception& e) {
        c.error = e.what();
      }
    }
  };
  const int workers = std::max(1, enumerator::default_workers());
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (budget_error) std::rethrow_exception(budget_error);

  std::ofstream out(run.file("sweep.csv"));
  out << std::setprecision(12) << f.axis << ",policy,mean_nwaoi,stderr,g_min,count,failures\n";
  json summary = json::array();
  for (std::size_t v = 0; v < f.values.size(); ++v) {
    for (std::size_t p = 0; p < f.policies.size(); ++p) {
      std::vector<double> xs;
      double g_min = 0.0;
      int failures = 0;
      for (const auto& c : cells) {
        if (c.value != v || c.policy != p) continue;
        g_min += c.g_min / f.seeds;
        if (std::isnan(c.objective)) {
          ++failures;
          continue;
        }
        xs.push_back(c.objective);
      }
      const double n = static_cast<double>(xs.size());
      const double mean = n > 0 ? std::accumulate(xs.begin(), xs.end(), 0.0) / n : NAN;
      double var = 0.0;
      for (double x : xs) var += (x - mean) * (x - mean);
      const double se = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
      out << f.values[v] << ',' << f.policies[p] << ',' << mean << ',' << se << ',' << g_min << ',' << xs.size() << ','
          << failures << '\n';
      summary.push_back({{"value", f.values[v]}, {"policy", f.policies[p]}, {"mean", mean}, {"stderr", se}});
      std::cout << f.axis << '=' << f.values[v] << ' ' << f.policies[p] << ": mean NWAoI " << mean << " (+-" << se
                << ", " << failures << " failed)\n";
    }
  }
  run.write_manifest({{"cells", summary}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-of-information UAV mission planner"};
  app.require_subcommand(1);
  const std::vector<std::string> args(argv, argv + argc);

  std::string scenario, schedule, out = "out", checkpoint, ae_path, policy = "enumerate";
  std::uint64_t seed = 0;

  auto* gen = app.add_subcommand("generate", "Write a random scenario");
  int gen_nodes = 3;
  GenerationOptions go;
  double gen_speed = 25.0, gen_beta0 = go.channel.beta0;
  gen->add_option("--nodes", gen_nodes, "Node count")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--region", go.region, "Square side, meters")->check(CLI::PositiveNumber);
  gen->add_option("--battery-lo", go.battery_lo, "Lowest battery, joules")->check(CLI::PositiveNumber);
  gen->add_option("--battery-hi", go.battery_hi, "Highest battery, joules")->check(CLI::PositiveNumber);
  gen->add_option("--speed", gen_speed, "Per-axis speed limit, m/s")->check(CLI::PositiveNumber);
  gen->add_option("--horizon", go.uav.horizon, "Mission length, seconds")->check(CLI::PositiveNumber);
  gen->add_option("--beta0", gen_beta0, "Reference channel gain at 1 m")->check(CLI::PositiveNumber);
  gen->add_option("--out", out, "Scenario file to write")->required();

  auto* solve = app.add_subcommand("solve", "Optimal times and waypoints for a fixed schedule");
  int grid = 1000;
  solve->add_option("--scenario", scenario)->required();
  solve->add_option("--schedule", schedule, "Comma-separated node ids")->required();
  solve->add_option("--grid", grid, "AoI trace samples")->check(CLI::PositiveNumber);
  solve->add_option("--out", out, "Output directory");

  auto* bnd = app.add_subcommand("bounds", "Analytic bounds report");
  bnd->add_option("--scenario", scenario)->required();
  bnd->add_option("--out", out, "Output directory");

  auto* en = app.add_subcommand("enumerate", "Exhaustive optimal schedule");
  std::uint64_t budget = 100000;
  int cap = -1;
  bool skip_zero = false;
  en->add_option("--scenario", scenario)->required();
  en->add_option("--budget", budget, "Maximum number of schedule solves");
  en->add_option("--cap", cap, "Maximum total updates (negative = no cap)");
  en->add_flag("--no-zero", skip_zero, "Require at least one update per node");
  en->add_option("--out", out, "Output directory");

  auto* td = app.add_subcommand("train-dqn", "Train a Q-network scheduler");
  DqnFlags dqn;
  td->add_option("--scenario", scenario)->required();
  td->add_option("--seed", seed, "Random seed");
  td->add_option("--autoencoder", ae_path, "Autoencoder checkpoint (LSTM state representation)");
  td->add_option("--out", out, "Output directory");
  dqn.add(td);

  auto* ta = app.add_subcommand("train-autoencoder", "Search and train the LSTM state autoencoder");
  AutoencoderFlags aef;
  ta->add_option("--scenario", scenario)->required();
  ta->add_option("--seed", seed, "Random seed");
  ta->add_option("--out", out, "Output directory");
  aef.add(ta);

  auto* ev = app.add_subcommand("eval", "Evaluate a scheduling policy");
  const auto policy_names = CLI::IsMember({"enumerate", "weight", "dqn", "dqn-lstm"});
  ev->add_option("--scenario", scenario)->required();
  ev->add_option("--policy", policy, "enumerate | weight | dqn | dqn-lstm")->check(policy_names);
  ev->add_option("--checkpoint", checkpoint, "Agent checkpoint for dqn policies");
  ev->add_option("--autoencoder", ae_path, "Autoencoder checkpoint for dqn-lstm");
  ev->add_option("--seed", seed, "Random seed");
  ev->add_option("--out", out, "Output directory");

  auto* sw = app.add_subcommand("sweep", "Mean NWAoI per policy along one parameter axis");
  SweepFlags sf;
  double sweep_beta0 = 0.0;
  sw->add_option("--scenario", scenario, "Template for channel, UAV, and node count");
  sw->add_option("--axis", sf.axis)->required()->check(CLI::IsMember({"nodes", "energy", "horizon", "speed"}));
  sw->add_option("--values", sf.values)->required()->expected(1, -1);
  sw->add_option("--policy", sf.policies, "Policies to compare")->expected(1, -1)->check(policy_names);
  sw->add_option("--seeds", sf.seeds, "Instances per value")->check(CLI::PositiveNumber);
  sw->add_option("--seed", seed, "Base seed");
  sw->add_option("--nodes", sf.nodes, "Node count without a template")->check(CLI::PositiveNumber);
  sw->add_option("--battery-lo", sf.battery_lo)->check(CLI::PositiveNumber);
  sw->add_option("--battery-hi", sf.battery_hi)->check(CLI::PositiveNumber);
  sw->add_option("--beta0", sweep_beta0, "Override the reference gain")->check(CLI::PositiveNumber);
  sw->add_option("--out", out, "Output directory");
  sf.dqn.episodes = 500;
  sf.dqn.add(sw);
  sf.ae.add(sw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      go.uav.vmax_x = go.uav.vmax_y = gen_speed;
      go.channel.beta0 = gen_beta0;
      return cmd_generate(gen_nodes, seed, go, out);
    }
    RunRecord run(out, app.get_subcommands().front()->get_name(), args);
    if (*solve) return cmd_solve(run, scenario, schedule, grid);
    if (*bnd) return cmd_bounds(run, scenario);
    if (*en) return cmd_enumerate(run, scenario, budget, cap, !skip_zero);
    if (*td) return cmd_train_dqn(run, scenario, seed, dqn, ae_path);
    if (*ta) return cmd_train_autoencoder(run, scenario, seed, aef);
    if (*ev) return cmd_eval(run, scenario, policy, seed, checkpoint, ae_path);
    if (*sw) {
      if (sweep_beta0 > 0.0) sf.beta0 = sweep_beta0;
      return cmd_sweep(run, scenario, seed, sf);
    }
  } catch (const MissingArtifact& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMissing;
  } catch (const neural::CheckpointError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMissing;
  } catch (const enumerator::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const enumerator::CountOverflow& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const SolverFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  } catch (const CoincidentTimesError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  }
  return kUsage;
}
