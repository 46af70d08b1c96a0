#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uavage/neural/params.hpp"

namespace uavage::neural {

/// LSTM cell with cell size equal to hidden size. Every gate reads z = [h_prev; x]:
///   f = sig(W_f z + b_f), r = sig(W_r z + b_r), c~ = tanh(W_c z + b_c),
///   c = f*c_prev + r*c~,  o = sig(W_o z + b_o),  h = o*tanh(c).
struct LstmCell {
  LstmCell() = default;
  LstmCell(int input_size, int hidden_size);

  int input_size = 0;
  int hidden_size = 0;
  Eigen::MatrixXd w_f, w_r, w_c, w_o;  // hidden x (hidden + input)
  Eigen::VectorXd b_f, b_r, b_c, b_o;

  void init(std::mt19937_64& rng);
  LstmCell zeros_like() const;
  void set_zero();
  ParamBlocks parameters(const std::string& prefix = "lstm");
};

struct LstmState {
  Eigen::VectorXd h;
  Eigen::VectorXd c;
};

struct LstmStepCache {
  Eigen::VectorXd z, c_prev;
  Eigen::VectorXd f, r, c_tilde, c, o, tanh_c;
};

LstmState lstm_step(const LstmCell& cell, const LstmState& prev, const Eigen::VectorXd& x);
LstmState lstm_step(const LstmCell& cell, const LstmState& prev, const Eigen::VectorXd& x, LstmStepCache& cache);

/// Gradients flowing into and out of one step of backprop-through-time.
struct LstmStepGrad {
  Eigen::VectorXd dh_prev;
  Eigen::VectorXd dc_prev;
  Eigen::VectorXd dx;
};

/// dh, dc: gradient with respect to this step's outputs (h from above plus the future, c from
/// the future). Accumulates parameter gradients into `grad`.
LstmStepGrad lstm_step_backward(const LstmCell& cell, const LstmStepCache& cache, const Eigen::VectorXd& dh,
                                const Eigen::VectorXd& dc, LstmCell& grad);

}  // namespace uavage::neural
