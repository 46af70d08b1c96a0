#include "uavage/qcqp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace uavage::qcqp {

double Constraint::value(const Eigen::VectorXd& z) const {
  double v = linear.dot(z) + constant;
  for (std::size_t k = 0; k < quad_index.size(); ++k) {
    const double zi = z[quad_index[k]];
    v += 0.5 * quad_coeff[k] * zi * zi;
  }
  return v;
}

Eigen::VectorXd Constraint::gradient(const Eigen::VectorXd& z) const {
  Eigen::VectorXd g = linear;
  for (std::size_t k = 0; k < quad_index.size(); ++k) g[quad_index[k]] += quad_coeff[k] * z[quad_index[k]];
  return g;
}

double Problem::objective(const Eigen::VectorXd& z) const {
  return 0.5 * z.dot(objective_hessian * z) + objective_linear.dot(z) + objective_constant;
}

Eigen::VectorXd Problem::objective_gradient(const Eigen::VectorXd& z) const {
  return objective_hessian * z + objective_linear;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::max_iterations: return "max_iterations";
  }
  return "unknown";
}

namespace {

struct PdOutcome {
  Status status = Status::max_iterations;
  Eigen::VectorXd z;
  Eigen::VectorXd lambda;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

Eigen::VectorXd constraint_values(const Problem& p, const Eigen::VectorXd& z) {
  Eigen::VectorXd f(p.constraints.size());
  for (std::size_t j = 0; j < p.constraints.size(); ++j) f[j] = p.constraints[j].value(z);
  return f;
}

Eigen::MatrixXd constraint_jacobian(const Problem& p, const Eigen::VectorXd& z) {
  Eigen::MatrixXd g(p.constraints.size(), z.size());
  for (std::size_t j = 0; j < p.constraints.size(); ++j) g.row(j) = p.constraints[j].gradient(z).transpose();
  return g;
}

Eigen::VectorXd solve_spd(Eigen::MatrixXd h, const Eigen::VectorXd& rhs) {
  double reg = 0.0;
  const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd x = llt.solve(rhs);
      if (x.allFinite()) return x;
    }
    const double next = reg == 0.0 ? 1e-14 * scale : reg * 100.0;
    h.diagonal().array() += next - reg;
    reg = next;
  }
  return Eigen::LDLT<Eigen::MatrixXd>(h).solve(rhs);
}

// Primal-dual iterations from a strictly feasible z. `early_stop` may end the run once
// the iterate is good enough for the caller (used by phase one).
PdOutcome primal_dual(const Problem& p, Eigen::VectorXd z, const Options& o, double tol,
                      const std::function<bool(const Eigen::VectorXd&)>& early_stop) {
  const int m = static_cast<int>(p.constraints.size());
  PdOutcome out;

  if (m == 0) {
    out.z = solve_spd(p.objective_hessian, -p.objective_linear);
    out.lambda = Eigen::VectorXd();
    out.dual_residual = p.objective_gradient(out.z).cwiseAbs().maxCoeff();
    out.status = out.dual_residual <= tol ? Status::optimal : Status::max_iterations;
    return out;
  }

  Eigen::VectorXd f = constraint_values(p, z);
  Eigen::VectorXd lambda = (-f).cwiseInverse();

  auto residual_norm = [&](const Eigen::VectorXd& zz, const Eigen::VectorXd& ll, const Eigen::VectorXd& ff,
                           double t) {
    const Eigen::VectorXd rd = p.objective_gradient(zz) + constraint_jacobian(p, zz).transpose() * ll;
    const Eigen::VectorXd rc = ll.cwiseProduct(-ff).array() - 1.0 / t;
    return std::sqrt(rd.squaredNorm() + rc.squaredNorm());
  };

  for (int it = 0; it < o.max_iterations; ++it) {
    out.iterations = it;
    const Eigen::MatrixXd g = constraint_jacobian(p, z);
    const Eigen::VectorXd grad0 = p.objective_gradient(z);
    const Eigen::VectorXd r_dual = grad0 + g.transpose() * lambda;
    const double eta = lambda.dot(-f);
    out.dual_residual = r_dual.cwiseAbs().maxCoeff();
    out.gap = eta;
    if (out.dual_residual <= tol && eta <= tol) {
      out.status = Status::optimal;
      break;
    }
    if (early_stop && early_stop(z)) {
      out.status = Status::optimal;
      break;
    }
    const double t = o.mu * m / eta;
    const Eigen::VectorXd neg_f = -f;
    const Eigen::VectorXd w = lambda.cwiseQuotient(neg_f);

    Eigen::MatrixXd h = p.objective_hessian;
    for (int j = 0; j < m; ++j) {
      const auto& c = p.constraints[j];
      for (std::size_t k = 0; k < c.quad_index.size(); ++k)
        h(c.quad_index[k], c.quad_index[k]) += lambda[j] * c.quad_coeff[k];
    }
    h.noalias() += g.transpose() * w.asDiagonal() * g;
    const Eigen::VectorXd inv_tf = (t * neg_f).cwiseInverse();
    const Eigen::VectorXd rhs = -grad0 - g.transpose() * inv_tf;
    const Eigen::VectorXd dz = solve_spd(h, rhs);
    const Eigen::VectorXd dlambda = w.cwiseProduct(g * dz) - lambda + inv_tf;

    double step = 1.0;
    for (int j = 0; j < m; ++j)
      if (dlambda[j] < 0.0) step = std::min(step, -lambda[j] / dlambda[j]);
    step *= 0.99;

    Eigen::VectorXd z_new, l_new, f_new;
    for (;;) {
      z_new = z + step * dz;
      f_new = constraint_values(p, z_new);
      if ((f_new.array() < 0.0).all()) break;
      step *= o.beta;
      if (step < 1e-16) break;
    }
    const double r0 = residual_norm(z, lambda, f, t);
    for (;;) {
      l_new = lambda + step * dlambda;
      if ((f_new.array() < 0.0).all() && residual_norm(z_new, l_new, f_new, t) <= (1.0 - o.alpha * step) * r0)
        break;
      step *= o.beta;
      if (step < 1e-16) break;
      z_new = z + step * dz;
      f_new = constraint_values(p, z_new);
    }
    if (step < 1e-16 || !(f_new.array() < 0.0).all()) break;  // stalled
    z = z_new;
    lambda = l_new;
    f = f_new;
    out.iterations = it + 1;
  }
  if (out.status != Status::optimal) {
    const Eigen::MatrixXd g = constraint_jacobian(p, z);
    out.dual_residual = (p.objective_gradient(z) + g.transpose() * lambda).cwiseAbs().maxCoeff();
    out.gap = lambda.dot(-f);
    if (out.dual_residual <= tol && out.gap <= tol) out.status = Status::optimal;
  }
  out.z = std::move(z);
  out.lambda = std::move(lambda);
  return out;
}

// Unit-gradient rows for linear constraints; returns the scale used per row.
Problem normalized(const Problem& p, std::vector<double>& scale) {
  Problem q = p;
  scale.assign(p.constraints.size(), 1.0);
  for (std::size_t j = 0; j < q.constraints.size(); ++j) {
    auto& c = q.constraints[j];
    if (!c.quad_index.empty()) continue;
    const double n = c.linear.norm();
    if (n > 0.0) {
      c.linear /= n;
      c.constant /= n;
      scale[j] = n;
    }
  }
  return q;
}

Problem phase_one(const Problem& p) {
  const int d = p.dimension();
  Problem q;
  q.objective_hessian = Eigen::MatrixXd::Zero(d + 1, d + 1);
  q.objective_linear = Eigen::VectorXd::Zero(d + 1);
  q.objective_linear[d] = 1.0;
  for (const auto& c : p.constraints) {
    Constraint e = c;
    e.linear.conservativeResize(d + 1);
    e.linear[d] = -1.0;
    q.constraints.push_back(std::move(e));
  }
  Constraint floor;  // s >= -1 keeps phase one bounded
  floor.linear = Eigen::VectorXd::Zero(d + 1);
  floor.linear[d] = -1.0;
  floor.constant = -1.0;
  q.constraints.push_back(std::move(floor));
  return q;
}

}  // namespace

Result solve(const Problem& problem, const Eigen::VectorXd& guess, const Options& options) {
  if (guess.size() != problem.dimension()) throw std::invalid_argument("qcqp::solve: guess has wrong dimension");
  if (!(options.tol > 0.0)) throw std::invalid_argument("qcqp::solve: tol must be positive");

  std::vector<double> scale;
  Problem p = normalized(problem, scale);
  const int d = p.dimension();
  Result result;

  Eigen::VectorXd z = guess;
  Eigen::VectorXd f0 = constraint_values(p, z);
  const double worst = f0.size() ? f0.maxCoeff() : -1.0;
  constexpr double kInteriorMargin = 1e-3;

  if (worst >= 0.0) {
    Problem p1 = phase_one(p);
    Eigen::VectorXd z1(d + 1);
    z1.head(d) = z;
    z1[d] = std::max(worst, 0.0) + 1.0;
    auto stop = [&](const Eigen::VectorXd& zz) {
      return constraint_values(p, zz.head(d)).maxCoeff() <= -kInteriorMargin;
    };
    Options o1 = options;
    PdOutcome r1 = primal_dual(p1, z1, o1, std::min(options.tol, 1e-10), stop);
    result.iterations += r1.iterations;
    z = r1.z.head(d);
    const double best = constraint_values(p, z).maxCoeff();
    result.phase_one_value = best;
    if (best >= 0.0) {
      const double lower = best - r1.gap;
      if (r1.status == Status::optimal && lower > 1e-9) {
        result.status = Status::infeasible;
        result.z = z;
        result.duals = Eigen::VectorXd::Zero(problem.constraints.size());
        result.objective = problem.objective(z);
        return result;
      }
      if (r1.status != Status::optimal) {
        result.status = Status::max_iterations;
        result.z = z;
        result.duals = Eigen::VectorXd::Zero(problem.constraints.size());
        result.objective = problem.objective(z);
        return result;
      }
      // Feasible set has no numerically strict interior: shift every row by a hair.
      const double shift = best + options.tol;
      for (auto& c : p.constraints) c.constant -= shift;
      result.relaxed = true;
    }
  }

  PdOutcome r2 = primal_dual(p, z, options, options.tol, {});
  result.iterations += r2.iterations;
  result.status = r2.status;
  result.z = r2.z;
  result.duals = Eigen::VectorXd::Zero(problem.constraints.size());
  for (std::size_t j = 0; j < problem.constraints.size(); ++j) result.duals[j] = r2.lambda[j] / scale[j];
  result.objective = problem.objective(result.z);
  result.dual_residual = r2.dual_residual;
  result.gap = r2.gap;

  double kkt = r2.dual_residual;
  for (std::size_t j = 0; j < problem.constraints.size(); ++j) {
    const double fj = problem.constraints[j].value(result.z);
    kkt = std::max(kkt, std::max(fj, 0.0) / scale[j]);
    kkt = std::max(kkt, std::abs(result.duals[j] * fj));
  }
  result.kkt_residual = kkt;
  return result;
}

}  // namespace uavage::qcqp
