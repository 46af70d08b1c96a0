#include "uavage/neural/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace uavage::neural {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
  }
  return "identity";
}

Activation activation_from_string(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Eigen::VectorXd activate(Activation a, const Eigen::VectorXd& z) {
  switch (a) {
    case Activation::identity: return z;
    case Activation::relu: return z.cwiseMax(0.0);
    case Activation::sigmoid: return z.unaryExpr([](double v) { return sigmoid(v); });
    case Activation::tanh: return z.array().tanh().matrix();
  }
  return z;
}

Eigen::VectorXd activation_derivative(Activation a, const Eigen::VectorXd& z) {
  switch (a) {
    case Activation::identity: return Eigen::VectorXd::Ones(z.size());
    case Activation::relu: return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
    case Activation::sigmoid:
      return z.unaryExpr([](double v) {
        const double s = sigmoid(v);
        return s * (1.0 - s);
      });
    case Activation::tanh:
      return z.unaryExpr([](double v) {
        const double t = std::tanh(v);
        return 1.0 - t * t;
      });
  }
  return Eigen::VectorXd::Ones(z.size());
}

DenseNet::DenseNet(const std::vector<int>& sizes, const std::vector<Activation>& activations) {
  if (sizes.size() < 2 || activations.size() != sizes.size() - 1)
    throw std::invalid_argument("DenseNet: need one activation per layer");
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    if (sizes[l] <= 0 || sizes[l + 1] <= 0) throw std::invalid_argument("DenseNet: layer sizes must be positive");
    layers.push_back({Eigen::MatrixXd::Zero(sizes[l + 1], sizes[l]), Eigen::VectorXd::Zero(sizes[l + 1]), activations[l]});
  }
}

void DenseNet::init(std::mt19937_64& rng) {
  for (auto& layer : layers) {
    const double r = std::sqrt(6.0 / static_cast<double>(layer.weight.rows() + layer.weight.cols()));
    std::uniform_real_distribution<double> u(-r, r);
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) layer.weight.data()[i] = u(rng);
    layer.bias.setZero();
  }
}

Eigen::VectorXd DenseNet::forward(const Eigen::VectorXd& x) const {
  if (x.size() != input_size()) throw std::invalid_argument("DenseNet::forward: input size mismatch");
  Eigen::VectorXd a = x;
  for (const auto& layer : layers) a = activate(layer.activation, layer.weight * a + layer.bias);
  return a;
}

Eigen::VectorXd DenseNet::forward(const Eigen::VectorXd& x, Cache& cache) const {
  if (x.size() != input_size()) throw std::invalid_argument("DenseNet::forward: input size mismatch");
  cache.inputs.clear();
  cache.pre.clear();
  Eigen::VectorXd a = x;
  for (const auto& layer : layers) {
    cache.inputs.push_back(a);
    cache.pre.push_back(layer.weight * a + layer.bias);
    a = activate(layer.activation, cache.pre.back());
  }
  return a;
}

Eigen::VectorXd DenseNet::backward(const Cache& cache, const Eigen::VectorXd& grad_out, DenseNet& grad) const {
  if (grad_out.size() != output_size()) throw std::invalid_argument("DenseNet::backward: gradient size mismatch");
  Eigen::VectorXd g = grad_out;
  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    const Eigen::VectorXd dz = g.cwiseProduct(activation_derivative(layers[l].activation, cache.pre[l]));
    grad.layers[l].weight.noalias() += dz * cache.inputs[l].transpose();
    grad.layers[l].bias += dz;
    g = layers[l].weight.transpose() * dz;
  }
  return g;
}

DenseNet DenseNet::zeros_like() const {
  DenseNet z = *this;
  z.set_zero();
  return z;
}

void DenseNet::set_zero() {
  for (auto& layer : layers) {
    layer.weight.setZero();
    layer.bias.setZero();
  }
}

int DenseNet::input_size() const { return layers.empty() ? 0 : static_cast<int>(layers.front().weight.cols()); }
int DenseNet::output_size() const { return layers.empty() ? 0 : static_cast<int>(layers.back().weight.rows()); }

std::vector<int> DenseNet::sizes() const {
  std::vector<int> s;
  if (layers.empty()) return s;
  s.push_back(input_size());
  for (const auto& layer : layers) s.push_back(static_cast<int>(layer.weight.rows()));
  return s;
}

ParamBlocks DenseNet::parameters(const std::string& prefix) {
  ParamBlocks blocks;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& w = layers[l].weight;
    auto& b = layers[l].bias;
    const std::string tag = prefix + "." + std::to_string(l);
    blocks.push_back({tag + ".weight", {static_cast<int>(w.rows()), static_cast<int>(w.cols())},
                      std::span<double>(w.data(), static_cast<std::size_t>(w.size()))});
    blocks.push_back({tag + ".bias", {static_cast<int>(b.size())}, std::span<double>(b.data(), static_cast<std::size_t>(b.size()))});
  }
  return blocks;
}

}  // namespace uavage::neural
