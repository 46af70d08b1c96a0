#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

// Primal-dual interior-point kernel for small dense convex QCQPs whose constraint
// Hessians are diagonal:
//
//   minimize    0.5 z'P z + q'z + r
//   subject to  f_j(z) = 0.5 sum_k d_jk z_k^2 + a_j'z + b_j <= 0,   d_jk >= 0.
//
// Both trajectory programs (fixed-schedule NWAoI and minimum speed) reduce to this shape.
namespace uavage::qcqp {

struct Constraint {
  std::vector<int> quad_index;     // variables carrying curvature
  std::vector<double> quad_coeff;  // second derivative for each listed variable
  Eigen::VectorXd linear;          // a_j
  double constant = 0.0;           // b_j

  double value(const Eigen::VectorXd& z) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& z) const;
};

struct Problem {
  Eigen::MatrixXd objective_hessian;  // P, symmetric PSD
  Eigen::VectorXd objective_linear;   // q
  double objective_constant = 0.0;    // r
  std::vector<Constraint> constraints;

  int dimension() const { return static_cast<int>(objective_linear.size()); }
  double objective(const Eigen::VectorXd& z) const;
  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& z) const;
};

enum class Status { optimal, infeasible, max_iterations };

std::string to_string(Status s);

struct Options {
  double tol = 1e-6;        // stationarity and duality-gap tolerance
  int max_iterations = 200; // Newton steps per phase
  double mu = 10.0;         // barrier parameter growth
  double alpha = 0.01;      // residual-decrease fraction in the line search
  double beta = 0.5;        // backtracking factor
};

struct Result {
  Status status = Status::max_iterations;
  Eigen::VectorXd z;
  Eigen::VectorXd duals;     // one per constraint, for the constraints as given
  double objective = 0.0;
  double dual_residual = 0.0;  // ||grad L||_inf
  double gap = 0.0;            // surrogate duality gap -f'lambda
  double kkt_residual = 0.0;   // max of stationarity, primal violation, max |lambda_j f_j|
  int iterations = 0;          // total Newton steps over both phases
  double phase_one_value = 0.0;  // optimal max_j f_j found by phase one (if run)
  bool relaxed = false;          // constraints shifted by tol because no strict interior exists
};

/// Solves the problem starting from `guess` (need not be feasible). Runs a phase-one
/// feasibility program when the guess is not strictly feasible and certifies
/// infeasibility when the phase-one optimum is positive.
Result solve(const Problem& problem, const Eigen::VectorXd& guess, const Options& options = {});

}  // namespace uavage::qcqp
