#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "uavage/neural/params.hpp"

namespace uavage::neural {

enum class OptimizerKind { sgd, momentum, adam };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::sgd;
  double lr = 1e-3;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class NonFiniteGradient : public std::runtime_error {
 public:
  NonFiniteGradient() : std::runtime_error("non-finite gradient") {}
};

/// theta <- theta - lr * g on every block pair.
void sgd_step(const ParamBlocks& params, const ParamBlocks& grads, double lr);

/// Stateful optimizer; the block layout must stay the same between calls.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config = {});

  void step(const ParamBlocks& params, const ParamBlocks& grads);
  const OptimizerConfig& config() const { return config_; }
  long long steps() const { return t_; }

 private:
  OptimizerConfig config_;
  std::vector<double> m_, v_;
  long long t_ = 0;
};

}  // namespace uavage::neural
