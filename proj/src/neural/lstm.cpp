#include "uavage/neural/lstm.hpp"

#include <cmath>
#include <stdexcept>

#include "uavage/neural/dense.hpp"

namespace uavage::neural {

namespace {

Eigen::VectorXd sig(const Eigen::VectorXd& v) { return v.unaryExpr([](double a) { return sigmoid(a); }); }

void check(const LstmCell& cell, const LstmState& prev, const Eigen::VectorXd& x) {
  if (x.size() != cell.input_size || prev.h.size() != cell.hidden_size || prev.c.size() != cell.hidden_size)
    throw std::invalid_argument("lstm_step: shape mismatch");
}

}  // namespace

LstmCell::LstmCell(int in, int hidden) : input_size(in), hidden_size(hidden) {
  if (in <= 0 || hidden <= 0) throw std::invalid_argument("LstmCell: sizes must be positive");
  for (auto* w : {&w_f, &w_r, &w_c, &w_o}) *w = Eigen::MatrixXd::Zero(hidden, hidden + in);
  for (auto* b : {&b_f, &b_r, &b_c, &b_o}) *b = Eigen::VectorXd::Zero(hidden);
}

void LstmCell::init(std::mt19937_64& rng) {
  const double r = std::sqrt(6.0 / static_cast<double>(hidden_size + hidden_size + input_size));
  std::uniform_real_distribution<double> u(-r, r);
  for (auto* w : {&w_f, &w_r, &w_c, &w_o})
    for (Eigen::Index i = 0; i < w->size(); ++i) w->data()[i] = u(rng);
  for (auto* b : {&b_f, &b_r, &b_c, &b_o}) b->setZero();
}

LstmCell LstmCell::zeros_like() const {
  LstmCell z = *this;
  z.set_zero();
  return z;
}

void LstmCell::set_zero() {
  for (auto* w : {&w_f, &w_r, &w_c, &w_o}) w->setZero();
  for (auto* b : {&b_f, &b_r, &b_c, &b_o}) b->setZero();
}

ParamBlocks LstmCell::parameters(const std::string& prefix) {
  ParamBlocks blocks;
  const char* names[] = {"f", "r", "c", "o"};
  Eigen::MatrixXd* ws[] = {&w_f, &w_r, &w_c, &w_o};
  Eigen::VectorXd* bs[] = {&b_f, &b_r, &b_c, &b_o};
  for (int g = 0; g < 4; ++g) {
    auto& w = *ws[g];
    auto& b = *bs[g];
    blocks.push_back({prefix + ".w_" + names[g], {static_cast<int>(w.rows()), static_cast<int>(w.cols())},
                      std::span<double>(w.data(), static_cast<std::size_t>(w.size()))});
    blocks.push_back({prefix + ".b_" + names[g], {static_cast<int>(b.size())},
                      std::span<double>(b.data(), static_cast<std::size_t>(b.size()))});
  }
  return blocks;
}

LstmState lstm_step(const LstmCell& cell, const LstmState& prev, const Eigen::VectorXd& x) {
  LstmStepCache cache;
  return lstm_step(cell, prev, x, cache);
}

LstmState lstm_step(const LstmCell& cell, const LstmState& prev, const Eigen::VectorXd& x, LstmStepCache& k) {
  check(cell, prev, x);
  k.z.resize(cell.hidden_size + cell.input_size);
  k.z << prev.h, x;
  k.c_prev = prev.c;
  k.f = sig(cell.w_f * k.z + cell.b_f);
  k.r = sig(cell.w_r * k.z + cell.b_r);
  k.c_tilde = (cell.w_c * k.z + cell.b_c).array().tanh().matrix();
  k.c = k.f.cwiseProduct(prev.c) + k.r.cwiseProduct(k.c_tilde);
  k.o = sig(cell.w_o * k.z + cell.b_o);
  k.tanh_c = k.c.array().tanh().matrix();
  return {k.o.cwiseProduct(k.tanh_c), k.c};
}

LstmStepGrad lstm_step_backward(const LstmCell& cell, const LstmStepCache& k, const Eigen::VectorXd& dh,
                                const Eigen::VectorXd& dc, LstmCell& grad) {
  const Eigen::ArrayXd one = Eigen::ArrayXd::Ones(cell.hidden_size);
  const Eigen::VectorXd d_o = dh.cwiseProduct(k.tanh_c);
  const Eigen::VectorXd dc_total =
      dc + (dh.array() * k.o.array() * (one - k.tanh_c.array().square())).matrix();

  const Eigen::VectorXd a_f = (dc_total.array() * k.c_prev.array() * k.f.array() * (one - k.f.array())).matrix();
  const Eigen::VectorXd a_r = (dc_total.array() * k.c_tilde.array() * k.r.array() * (one - k.r.array())).matrix();
  const Eigen::VectorXd a_c = (dc_total.array() * k.r.array() * (one - k.c_tilde.array().square())).matrix();
  const Eigen::VectorXd a_o = (d_o.array() * k.o.array() * (one - k.o.array())).matrix();

  grad.w_f.noalias() += a_f * k.z.transpose();
  grad.w_r.noalias() += a_r * k.z.transpose();
  grad.w_c.noalias() += a_c * k.z.transpose();
  grad.w_o.noalias() += a_o * k.z.transpose();
  grad.b_f += a_f;
  grad.b_r += a_r;
  grad.b_c += a_c;
  grad.b_o += a_o;

  const Eigen::VectorXd dz = cell.w_f.transpose() * a_f + cell.w_r.transpose() * a_r + cell.w_c.transpose() * a_c +
                             cell.w_o.transpose() * a_o;
  LstmStepGrad out;
  out.dh_prev = dz.head(cell.hidden_size);
  out.dx = dz.tail(cell.input_size);
  out.dc_prev = dc_total.cwiseProduct(k.f);
  return out;
}

}  // namespace uavage::neural
