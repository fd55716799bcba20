#pragma once

#include <functional>

#include "eht/linalg.hpp"

namespace eht {

// Objective callback: returns f(x); when grad is non-null it must be filled
// with the gradient at x.
using Objective = std::function<double(const VectorXd& x, VectorXd* grad)>;

struct BfgsOptions {
  int max_iterations = 500;
  double gradient_tol = 1e-8;  // infinity norm of the gradient
  double step_tol = 1e-13;     // minimum relative step before giving up
  double value_rel_tol = 0.0;  // relative objective change; > 0 enables
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_line_search = 50;
};

struct BfgsResult {
  VectorXd x;
  double value = 0.0;
  VectorXd gradient;
  int iterations = 0;
  int n_evaluations = 0;
  bool converged = false;
};

// Quasi-Newton minimization with a dense inverse-Hessian update and Armijo
// backtracking; falls back to steepest descent when the model direction
// stops being a descent direction.
BfgsResult minimize_bfgs(const Objective& f, VectorXd x0,
                         const BfgsOptions& options = {});

// Central differences, step h scaled by max(1, |x_i|) per coordinate.
VectorXd finite_difference_gradient(const std::function<double(const VectorXd&)>& f,
                                    const VectorXd& x, double h = 1e-6);

}  // namespace eht
