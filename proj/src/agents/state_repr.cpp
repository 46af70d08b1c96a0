#include "uavage/agents/state_repr.hpp"

namespace uavage::agents {

std::string to_string(ReprMode m) { return m == ReprMode::autoencoder ? "autoencoder" : "last_column"; }

StateRepr::StateRepr(std::shared_ptr<const Autoencoder> model) : model_(std::move(model)) {}

Eigen::VectorXd StateRepr::encode(const Scenario& s, const StateMatrix& st) const {
  const Eigen::MatrixXd x = normalize_state(s, st);
  if (!model_) return x.col(x.cols() - 1);
  if (model_->input_size() != s.node_count() + 1)
    throw std::invalid_argument("autoencoder input size does not match the scenario");
  return model_->encode(x);
}

int StateRepr::size(const Scenario& s) const { return model_ ? model_->repr_size() : s.node_count() + 1; }

}  // namespace uavage::agents
