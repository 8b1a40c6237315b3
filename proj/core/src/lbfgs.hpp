#pragma once

#include <Eigen/Dense>

#include <functional>

namespace blissthc::detail {

// f(x, grad) returns the objective and fills grad.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LbfgsOptions {
  int max_iterations = 1000;
  double gradient_tolerance = 1e-8;
  int memory = 20;
  double armijo_c1 = 1e-4;
  int max_backtracks = 60;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Limited-memory BFGS with Armijo backtracking. Accepted iterates never increase f.
// Throws DivergenceError if f is non-finite at the start or every trial step is.
LbfgsResult lbfgs_minimize(const Objective& f, Eigen::VectorXd x0, const LbfgsOptions& opt);

}  // namespace blissthc::detail
