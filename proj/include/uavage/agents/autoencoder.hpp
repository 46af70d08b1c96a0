#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "uavage/mdp_env.hpp"
#include "uavage/neural/dense.hpp"
#include "uavage/neural/lstm.hpp"
#include "uavage/neural/optimizer.hpp"
#include "uavage/scenario.hpp"

namespace uavage::agents {

/// Energies over E_m^max, time over tau; every entry lands in [0, 1].
Eigen::MatrixXd normalize_state(const Scenario& s, const StateMatrix& st);
StateMatrix denormalize_state(const Scenario& s, const Eigen::MatrixXd& normalized);

/// Sequence-to-sequence LSTM autoencoder over state columns. The encoder reads the columns
/// last-to-first, so its final input is always the fixed initial column. The decoder starts
/// from the encoder's (h, c), sees a zero vector and then the true previous column, and maps
/// each hidden state to a column through a linear layer.
class Autoencoder {
 public:
  Autoencoder() = default;
  Autoencoder(int input_size, int k_c, int k_h);

  void init(std::mt19937_64& rng);
  Autoencoder zeros_like() const;

  /// concat(c, h) after the encoder pass; c is truncated or zero-padded to k_c entries.
  Eigen::VectorXd encode(const Eigen::MatrixXd& normalized) const;
  /// Reconstruction in the original (unflipped) column order.
  Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& normalized) const;
  /// Mean squared reconstruction error.
  double loss(const Eigen::MatrixXd& normalized) const;
  /// Same loss; adds its gradient into `grad`.
  double loss_and_gradient(const Eigen::MatrixXd& normalized, Autoencoder& grad) const;

  neural::ParamBlocks parameters();

  int input_size() const { return input_size_; }
  int k_c() const { return k_c_; }
  int k_h() const { return k_h_; }
  int repr_size() const { return k_c_ + k_h_; }

  void save(const std::filesystem::path& path, const nlohmann::json& meta = {}) const;
  static Autoencoder load(const std::filesystem::path& path);

  neural::LstmCell encoder;
  neural::LstmCell decoder;
  neural::DenseNet output;

 private:
  int input_size_ = 0;
  int k_c_ = 0;
  int k_h_ = 0;
};

struct AutoencoderConfig {
  neural::OptimizerConfig optimizer;  // plain SGD at 1e-3 unless overridden
  int batch = 16;
  double train_fraction = 0.7;
};

struct AutoencoderResult {
  Autoencoder model;
  double train_mse = 0.0;
  double test_mse = 0.0;
  std::vector<double> epoch_loss;  // mean training loss per epoch, measured during the epoch
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

class EmptyCorpusError : public std::invalid_argument {
 public:
  EmptyCorpusError() : std::invalid_argument("autoencoder corpus is empty") {}
};

AutoencoderResult autoencoder_train(const Scenario& s, int k_c, int k_h, const std::vector<StateMatrix>& corpus,
                                    int epochs, std::uint64_t seed, const AutoencoderConfig& config = {});

/// States visited by weight-based rollouts (every prefix of each episode, including S_0).
/// Stops early once max_states is reached (0 means no limit).
std::vector<StateMatrix> collect_corpus(const Scenario& s, int episodes, std::uint64_t seed, std::size_t max_states = 0,
                                        const EnvOptions& env = {});

struct SearchConfig {
  AutoencoderConfig train;
  int epochs = 50;
  bool joint = true;  // only pairs with k_c == k_h
  std::size_t max_states = 0;
  EnvOptions env;
};

struct SearchPoint {
  int k_c = 0;
  int k_h = 0;
  double test_mse = 0.0;
};

struct SearchResult {
  int k_c = 0;
  int k_h = 0;
  double test_mse = 0.0;
  std::vector<SearchPoint> grid;
  AutoencoderResult best;
  std::size_t corpus_size = 0;
};

/// Grid search over (k_c, k_h) minimizing test MSE on a weight-based corpus.
SearchResult autoencoder_hyperparam_search(const Scenario& s, const std::vector<int>& k_c_range,
                                           const std::vector<int>& k_h_range, int episodes, std::uint64_t seed,
                                           const SearchConfig& config = {});

}  // namespace uavage::agents
