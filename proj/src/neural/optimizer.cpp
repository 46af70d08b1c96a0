#include "uavage/neural/optimizer.hpp"

#include <cmath>

namespace uavage::neural {

std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::momentum: return "momentum";
    case OptimizerKind::adam: return "adam";
  }
  return "sgd";
}

OptimizerKind optimizer_from_string(const std::string& name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "momentum") return OptimizerKind::momentum;
  if (name == "adam") return OptimizerKind::adam;
  throw std::invalid_argument("unknown optimizer '" + name + "'");
}

namespace {

void check_layout(const ParamBlocks& params, const ParamBlocks& grads) {
  if (params.size() != grads.size()) throw std::invalid_argument("optimizer: block count mismatch");
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].values.size() != grads[b].values.size())
      throw std::invalid_argument("optimizer: block '" + params[b].name + "' size mismatch");
    for (double g : grads[b].values)
      if (!std::isfinite(g)) throw NonFiniteGradient();
  }
}

}  // namespace

void sgd_step(const ParamBlocks& params, const ParamBlocks& grads, double lr) {
  if (!(lr > 0.0)) throw std::invalid_argument("sgd_step: lr must be positive");
  check_layout(params, grads);
  for (std::size_t b = 0; b < params.size(); ++b)
    for (std::size_t i = 0; i < params[b].values.size(); ++i) params[b].values[i] -= lr * grads[b].values[i];
}

Optimizer::Optimizer(OptimizerConfig config) : config_(config) {
  if (!(config_.lr > 0.0)) throw std::invalid_argument("Optimizer: lr must be positive");
}

void Optimizer::step(const ParamBlocks& params, const ParamBlocks& grads) {
  check_layout(params, grads);
  if (config_.kind == OptimizerKind::sgd) {
    sgd_step(params, grads, config_.lr);
    ++t_;
    return;
  }
  const std::size_t n = total_size(params);
  if (m_.size() != n) {
    m_.assign(n, 0.0);
    v_.assign(n, 0.0);
    t_ = 0;
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  std::size_t k = 0;
  for (std::size_t b = 0; b < params.size(); ++b) {
    for (std::size_t i = 0; i < params[b].values.size(); ++i, ++k) {
      const double g = grads[b].values[i];
      if (config_.kind == OptimizerKind::momentum) {
        m_[k] = config_.momentum * m_[k] + g;
        params[b].values[i] -= config_.lr * m_[k];
      } else {
        m_[k] = config_.beta1 * m_[k] + (1.0 - config_.beta1) * g;
        v_[k] = config_.beta2 * v_[k] + (1.0 - config_.beta2) * g * g;
        params[b].values[i] -= config_.lr * (m_[k] / bc1) / (std::sqrt(v_[k] / bc2) + config_.eps);
      }
    }
  }
}

}  // namespace uavage::neural
