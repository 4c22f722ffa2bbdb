#pragma once

#include <functional>
#include <vector>

#include "codashrink/types.hpp"

namespace codashrink {

// Objective callback: returns f(x); fills grad when grad != nullptr.
using Objective = std::function<double(const VectorXd& x, VectorXd* grad)>;

struct LbfgsOptions {
  int max_iterations = 500;
  double grad_tol = 1e-6;  // sup-norm of the projected gradient
  int memory = 10;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
};

struct LbfgsResult {
  VectorXd x;
  double f = 0.0;
  VectorXd grad;
  bool converged = false;
  int iterations = 0;
  bool at_bound = false;
  std::vector<double> trace;  // accepted objective values, non-decreasing
};

// Maximizes f over the box [lower, upper] (pass empty vectors for an
// unconstrained problem) with limited-memory BFGS and projected backtracking
// line search. Every accepted step satisfies an Armijo increase, so `trace`
// is monotone.
LbfgsResult lbfgs_maximize(const Objective& f, const VectorXd& x0,
                           const LbfgsOptions& opts = {},
                           const VectorXd& lower = VectorXd(),
                           const VectorXd& upper = VectorXd());

}  // namespace codashrink
