#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uavage/neural/params.hpp"

namespace uavage::neural {

enum class Activation { identity, relu, sigmoid, tanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

/// Overflow-safe logistic function.
double sigmoid(double x);
Eigen::VectorXd activate(Activation a, const Eigen::VectorXd& z);
/// Derivative with respect to the pre-activation z.
Eigen::VectorXd activation_derivative(Activation a, const Eigen::VectorXd& z);

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
  Activation activation = Activation::identity;
};

/// Fully connected feed-forward network. A default-constructed gradient twin
/// (same shapes, zeros) is obtained with zeros_like().
class DenseNet {
 public:
  DenseNet() = default;
  /// sizes = {in, h1, ..., out}; one activation per layer.
  DenseNet(const std::vector<int>& sizes, const std::vector<Activation>& activations);

  /// Uniform init in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  void init(std::mt19937_64& rng);

  struct Cache {
    std::vector<Eigen::VectorXd> inputs;  // input to each layer
    std::vector<Eigen::VectorXd> pre;     // pre-activation of each layer
  };

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& x, Cache& cache) const;
  /// Adds dL/dtheta into `grad` (same shapes) and returns dL/dx.
  Eigen::VectorXd backward(const Cache& cache, const Eigen::VectorXd& grad_out, DenseNet& grad) const;

  DenseNet zeros_like() const;
  void set_zero();

  int input_size() const;
  int output_size() const;
  std::vector<int> sizes() const;

  ParamBlocks parameters(const std::string& prefix = "dense");

  std::vector<DenseLayer> layers;
};

}  // namespace uavage::neural
