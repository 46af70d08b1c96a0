#pragma once

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "uavage/agents/autoencoder.hpp"
#include "uavage/mdp_env.hpp"
#include "uavage/scenario.hpp"

namespace uavage::agents {

enum class ReprMode { last_column, autoencoder };

std::string to_string(ReprMode m);

/// Fixed-size view of a state matrix fed to the Q-network.
class StateRepr {
 public:
  StateRepr() = default;  // last column
  explicit StateRepr(std::shared_ptr<const Autoencoder> model);

  ReprMode mode() const { return model_ ? ReprMode::autoencoder : ReprMode::last_column; }
  Eigen::VectorXd encode(const Scenario& s, const StateMatrix& st) const;
  int size(const Scenario& s) const;
  const Autoencoder* autoencoder() const { return model_.get(); }

 private:
  std::shared_ptr<const Autoencoder> model_;
};

}  // namespace uavage::agents
