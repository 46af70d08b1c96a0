#include "uavage/agents/autoencoder.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "uavage/agents/weight_policy.hpp"
#include "uavage/neural/params.hpp"

namespace uavage::agents {

Eigen::MatrixXd normalize_state(const Scenario& s, const StateMatrix& st) {
  const int M = s.node_count();
  if (st.node_count() != M) throw std::invalid_argument("normalize_state: node count mismatch");
  Eigen::MatrixXd out = st.data;
  for (int m = 0; m < M; ++m) out.row(m) /= s.nodes[m].battery;
  out.row(M) /= s.uav.horizon;
  return out;
}

StateMatrix denormalize_state(const Scenario& s, const Eigen::MatrixXd& normalized) {
  const int M = s.node_count();
  StateMatrix st;
  st.data = normalized;
  for (int m = 0; m < M; ++m) st.data.row(m) *= s.nodes[m].battery;
  st.data.row(M) *= s.uav.horizon;
  return st;
}

Autoencoder::Autoencoder(int input_size, int k_c, int k_h)
    : encoder(input_size, k_h),
      decoder(input_size, k_h),
      output({k_h, input_size}, {neural::Activation::identity}),
      input_size_(input_size),
      k_c_(k_c),
      k_h_(k_h) {
  if (k_c <= 0) throw std::invalid_argument("Autoencoder: k_c must be positive");
}

void Autoencoder::init(std::mt19937_64& rng) {
  encoder.init(rng);
  decoder.init(rng);
  output.init(rng);
}

Autoencoder Autoencoder::zeros_like() const {
  Autoencoder z = *this;
  z.encoder.set_zero();
  z.decoder.set_zero();
  z.output.set_zero();
  return z;
}

neural::ParamBlocks Autoencoder::parameters() {
  auto blocks = encoder.parameters("encoder");
  for (auto& b : decoder.parameters("decoder")) blocks.push_back(std::move(b));
  for (auto& b : output.parameters("output")) blocks.push_back(std::move(b));
  return blocks;
}

namespace {

std::vector<Eigen::VectorXd> flipped(const Eigen::MatrixXd& x) {
  std::vector<Eigen::VectorXd> seq;
  for (Eigen::Index k = x.cols() - 1; k >= 0; --k) seq.push_back(x.col(k));
  return seq;
}

neural::LstmState zero_state(int k) { return {Eigen::VectorXd::Zero(k), Eigen::VectorXd::Zero(k)}; }

}  // namespace

Eigen::VectorXd Autoencoder::encode(const Eigen::MatrixXd& normalized) const {
  if (normalized.rows() != input_size_ || normalized.cols() < 1) throw std::invalid_argument("encode: bad state shape");
  neural::LstmState st = zero_state(k_h_);
  for (const auto& x : flipped(normalized)) st = neural::lstm_step(encoder, st, x);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(k_c_ + k_h_);
  const int keep = std::min(k_c_, k_h_);
  out.head(keep) = st.c.head(keep);
  out.tail(k_h_) = st.h;
  return out;
}

Eigen::MatrixXd Autoencoder::reconstruct(const Eigen::MatrixXd& normalized) const {
  const auto seq = flipped(normalized);
  neural::LstmState st = zero_state(k_h_);
  for (const auto& x : seq) st = neural::lstm_step(encoder, st, x);
  const Eigen::Index T = normalized.cols();
  Eigen::MatrixXd out(input_size_, T);
  Eigen::VectorXd in = Eigen::VectorXd::Zero(input_size_);
  for (Eigen::Index k = 0; k < T; ++k) {
    st = neural::lstm_step(decoder, st, in);
    out.col(T - 1 - k) = output.forward(st.h);
    in = seq[k];
  }
  return out;
}

double Autoencoder::loss(const Eigen::MatrixXd& normalized) const {
  return (reconstruct(normalized) - normalized).squaredNorm() / static_cast<double>(normalized.size());
}

double Autoencoder::loss_and_gradient(const Eigen::MatrixXd& normalized, Autoencoder& grad) const {
  if (normalized.rows() != input_size_ || normalized.cols() < 1) throw std::invalid_argument("loss: bad state shape");
  const auto seq = flipped(normalized);
  const std::size_t T = seq.size();
  const double scale = 2.0 / static_cast<double>(normalized.size());

  std::vector<neural::LstmStepCache> enc_cache(T), dec_cache(T);
  std::vector<neural::DenseNet::Cache> out_cache(T);
  std::vector<Eigen::VectorXd> err(T);

  neural::LstmState st = zero_state(k_h_);
  for (std::size_t k = 0; k < T; ++k) st = neural::lstm_step(encoder, st, seq[k], enc_cache[k]);
  Eigen::VectorXd in = Eigen::VectorXd::Zero(input_size_);
  double loss = 0.0;
  for (std::size_t k = 0; k < T; ++k) {
    st = neural::lstm_step(decoder, st, in, dec_cache[k]);
    err[k] = output.forward(st.h, out_cache[k]) - seq[k];
    loss += err[k].squaredNorm();
    in = seq[k];
  }

  Eigen::VectorXd dh = Eigen::VectorXd::Zero(k_h_);
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(k_h_);
  for (std::size_t k = T; k-- > 0;) {
    dh += output.backward(out_cache[k], scale * err[k], grad.output);
    const auto g = neural::lstm_step_backward(decoder, dec_cache[k], dh, dc, grad.decoder);
    dh = g.dh_prev;
    dc = g.dc_prev;
  }
  for (std::size_t k = T; k-- > 0;) {
    const auto g = neural::lstm_step_backward(encoder, enc_cache[k], dh, dc, grad.encoder);
    dh = g.dh_prev;
    dc = g.dc_prev;
  }
  return loss / static_cast<double>(normalized.size());
}

void Autoencoder::save(const std::filesystem::path& path, const nlohmann::json& meta) const {
  Autoencoder copy = *this;
  nlohmann::json m = meta;
  m["kind"] = "lstm_autoencoder";
  m["input_size"] = input_size_;
  m["k_c"] = k_c_;
  m["k_h"] = k_h_;
  neural::save_checkpoint(path, neural::collect(copy.parameters()), m);
}

Autoencoder Autoencoder::load(const std::filesystem::path& path) {
  const auto ck = neural::load_checkpoint(path);
  if (ck.meta.value("kind", "") != "lstm_autoencoder") throw neural::CheckpointError("not an autoencoder checkpoint");
  Autoencoder a(ck.meta.at("input_size").get<int>(), ck.meta.at("k_c").get<int>(), ck.meta.at("k_h").get<int>());
  neural::apply(ck.params, a.parameters());
  return a;
}

AutoencoderResult autoencoder_train(const Scenario& s, int k_c, int k_h, const std::vector<StateMatrix>& corpus,
                                    int epochs, std::uint64_t seed, const AutoencoderConfig& config) {
  if (corpus.empty()) throw EmptyCorpusError();
  if (epochs < 0) throw std::invalid_argument("autoencoder_train: negative epoch count");
  std::mt19937_64 rng(seed);

  std::vector<Eigen::MatrixXd> data;
  for (const auto& st : corpus) data.push_back(normalize_state(s, st));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_train = static_cast<std::size_t>(config.train_fraction * static_cast<double>(data.size()));
  n_train = std::clamp<std::size_t>(n_train, 1, data.size());
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  if (test.empty()) test = train;  // a single sample serves as both

  AutoencoderResult res;
  res.train_size = train.size();
  res.test_size = test.size();
  res.model = Autoencoder(s.node_count() + 1, k_c, k_h);
  res.model.init(rng);
  Autoencoder grad = res.model.zeros_like();
  neural::Optimizer opt(config.optimizer);
  const std::size_t batch = static_cast<std::size_t>(std::max(1, config.batch));

  for (int e = 0; e < epochs; ++e) {
    std::shuffle(train.begin(), train.end(), rng);
    double total = 0.0;
    for (std::size_t start = 0; start < train.size(); start += batch) {
      const std::size_t stop = std::min(train.size(), start + batch);
      grad = res.model.zeros_like();
      for (std::size_t i = start; i < stop; ++i) total += res.model.loss_and_gradient(data[train[i]], grad);
      const double inv = 1.0 / static_cast<double>(stop - start);
      auto gb = grad.parameters();
      for (auto& b : gb)
        for (double& v : b.values) v *= inv;
      opt.step(res.model.parameters(), gb);
    }
    res.epoch_loss.push_back(total / static_cast<double>(train.size()));
  }

  auto mean_loss = [&](const std::vector<std::size_t>& idx) {
    double t = 0.0;
    for (std::size_t i : idx) t += res.model.loss(data[i]);
    return t / static_cast<double>(idx.size());
  };
  res.train_mse = mean_loss(train);
  res.test_mse = mean_loss(test);
  return res;
}

std::vector<StateMatrix> collect_corpus(const Scenario& s, int episodes, std::uint64_t seed, std::size_t max_states,
                                        const EnvOptions& env) {
  std::vector<StateMatrix> corpus;
  std::mt19937_64 seeds(seed);
  for (int e = 0; e < episodes; ++e) {
    const Rollout r = weight_based_rollout(s, seeds(), env);
    for (const auto& st : r.states) {
      corpus.push_back(st);
      if (max_states > 0 && corpus.size() >= max_states) return corpus;
    }
  }
  return corpus;
}

SearchResult autoencoder_hyperparam_search(const Scenario& s, const std::vector<int>& k_c_range,
                                           const std::vector<int>& k_h_range, int episodes, std::uint64_t seed,
                                           const SearchConfig& config) {
  if (k_c_range.empty() || k_h_range.empty()) throw std::invalid_argument("hyperparameter ranges must be nonempty");
  std::vector<std::pair<int, int>> grid;
  for (int kc : k_c_range)
    for (int kh : k_h_range)
      if (!config.joint || kc == kh) grid.emplace_back(kc, kh);
  if (grid.empty()) throw std::invalid_argument("joint search needs at least one k_c equal to some k_h");

  SearchResult res;
  const auto corpus = collect_corpus(s, episodes, seed, config.max_states, config.env);
  res.corpus_size = corpus.size();
  res.test_mse = std::numeric_limits<double>::infinity();
  for (const auto& [kc, kh] : grid) {
    AutoencoderResult r = autoencoder_train(s, kc, kh, corpus, config.epochs, seed, config.train);
    res.grid.push_back({kc, kh, r.test_mse});
    if (r.test_mse < res.test_mse) {
      res.test_mse = r.test_mse;
      res.k_c = kc;
      res.k_h = kh;
      res.best = std::move(r);
    }
  }
  return res;
}

}  // namespace uavage::agents
