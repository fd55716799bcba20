#include "eht/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace eht {

namespace {

// Armijo backtracking from unit step. Returns the accepted step length, or
// 0 when no sufficient decrease was found.
double line_search(const Objective& f, const VectorXd& x, double fx,
                   const VectorXd& direction, double slope,
                   const BfgsOptions& opt, VectorXd& x_out, double& fx_out,
                   int& n_evals) {
  double t = 1.0;
  for (int k = 0; k < opt.max_line_search; ++k) {
    x_out = x + t * direction;
    fx_out = f(x_out, nullptr);
    ++n_evals;
    if (std::isfinite(fx_out) && fx_out <= fx + opt.armijo_c * t * slope) {
      return t;
    }
    t *= opt.backtrack;
  }
  return 0.0;
}

}  // namespace

BfgsResult minimize_bfgs(const Objective& f, VectorXd x0,
                         const BfgsOptions& opt) {
  const auto n = x0.size();
  if (n == 0) throw std::invalid_argument("empty starting point");

  BfgsResult res;
  res.x = std::move(x0);
  res.gradient.resize(n);
  res.value = f(res.x, &res.gradient);
  res.n_evaluations = 1;
  if (!std::isfinite(res.value)) {
    throw std::invalid_argument("objective is not finite at the starting point");
  }

  MatrixXd h_inv = MatrixXd::Identity(n, n);
  bool first_update = true;

  for (res.iterations = 0; res.iterations < opt.max_iterations;
       ++res.iterations) {
    if (res.gradient.lpNorm<Eigen::Infinity>() < opt.gradient_tol) {
      res.converged = true;
      return res;
    }

    VectorXd direction = -(h_inv * res.gradient);
    double slope = direction.dot(res.gradient);
    if (!(slope < 0.0)) {
      // Curvature information went bad; restart from steepest descent.
      h_inv.setIdentity();
      first_update = true;
      direction = -res.gradient;
      slope = -res.gradient.squaredNorm();
    }

    VectorXd x_new(n);
    double f_new = 0.0;
    double t = line_search(f, res.x, res.value, direction, slope, opt, x_new,
                           f_new, res.n_evaluations);
    if (t == 0.0 && !first_update) {
      // Retry once along the raw gradient before giving up.
      h_inv.setIdentity();
      first_update = true;
      direction = -res.gradient;
      slope = -res.gradient.squaredNorm();
      t = line_search(f, res.x, res.value, direction, slope, opt, x_new, f_new,
                      res.n_evaluations);
    }
    if (t == 0.0) return res;  // line search exhausted; gradient still large

    const VectorXd step = x_new - res.x;
    if (step.norm() <= opt.step_tol * std::max(1.0, res.x.norm())) {
      res.x = std::move(x_new);
      res.value = f_new;
      f(res.x, &res.gradient);
      ++res.n_evaluations;
      res.converged =
          res.gradient.lpNorm<Eigen::Infinity>() < opt.gradient_tol;
      return res;
    }

    VectorXd grad_new(n);
    f_new = f(x_new, &grad_new);
    ++res.n_evaluations;

    const bool value_settled =
        opt.value_rel_tol > 0.0 &&
        std::abs(res.value - f_new) <=
            opt.value_rel_tol * std::max(1.0, std::abs(res.value));

    const VectorXd y = grad_new - res.gradient;
    const double sy = step.dot(y);
    if (sy > 1e-12 * step.norm() * y.norm()) {
      if (first_update) {
        // Scale the seed matrix to the measured curvature before the first
        // update; standard cure for the unit initial Hessian.
        h_inv *= sy / y.squaredNorm();
        first_update = false;
      }
      const double rho = 1.0 / sy;
      const VectorXd hy = h_inv * y;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded.
      h_inv.noalias() -= rho * (step * hy.transpose() + hy * step.transpose());
      h_inv.noalias() +=
          (rho * rho * y.dot(hy) + rho) * (step * step.transpose());
    }

    res.x = std::move(x_new);
    res.value = f_new;
    res.gradient = std::move(grad_new);
    if (value_settled) {
      ++res.iterations;
      res.converged = true;
      return res;
    }
  }

  res.converged = res.gradient.lpNorm<Eigen::Infinity>() < opt.gradient_tol;
  return res;
}

VectorXd finite_difference_gradient(
    const std::function<double(const VectorXd&)>& f, const VectorXd& x,
    double h) {
  if (h <= 0.0) throw std::invalid_argument("step must be positive");
  VectorXd grad(x.size());
  VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x(i)));
    probe(i) = x(i) + step;
    const double fp = f(probe);
    probe(i) = x(i) - step;
    const double fm = f(probe);
    probe(i) = x(i);
    grad(i) = (fp - fm) / (2.0 * step);
  }
  return grad;
}

}  // namespace eht
