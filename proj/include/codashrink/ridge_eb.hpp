#pragma once

#include <limits>
#include <vector>

#include "codashrink/codata.hpp"
#include "codashrink/types.hpp"

namespace codashrink {

// Gaussian prior variances are tied to co-data through a log link:
// lambda_j = exp(Z_.j^T alpha), v_j = 1 / lambda_j. The link keeps penalties
// positive and the hyperparameter problem unconstrained.
struct PenaltyFit {
  VectorXd alpha;  // length C
  VectorXd v;      // per-feature prior variances, length p
  double sigma2 = 0.0;
  double logml = 0.0;  // attained objective (penalized when shrinkage is on)
  bool converged = false;
  int iterations = 0;
  bool at_bound = false;  // a hyperparameter finished on its numeric box
  std::vector<double> objective_trace;
  double shrink_target =
      std::numeric_limits<double>::quiet_NaN();  // resolved log lambda target
};

// Targeted shrinkage of per-group log penalties toward a common value via a
// smoothed Laplace log-prior. Only valid when Z is a single grouping.
struct ShrinkConfig {
  bool enabled = false;
  // log lambda_common; NaN derives it from the single-penalty fit.
  double target_log_lambda = std::numeric_limits<double>::quiet_NaN();
  double scale = 1.0;
  double smooth_c = 1e-8;
};

struct RidgeFitOptions {
  int max_iterations = 500;
  double grad_tol = 1e-6;
  // numeric box, relative to var(y) (1.0 when y is constant):
  double sigma2_floor_rel = 1e-8;
  double sigma2_cap_rel = 1e8;
  double v_cap_rel = 1e8;
  double v_floor_rel = 1e-12;
};

// Gaussian log marginal likelihood of y ~ N(0, X diag(v) X^T + sigma2 I),
// computed in the n x n formulation. Throws numeric_error when the
// covariance is not numerically positive definite.
double log_marglik(const Dataset& d, const VectorXd& v, double sigma2);

// Gradient of log_marglik composed with the link, with respect to
// (alpha_1..alpha_C, log sigma2). Length C + 1.
VectorXd log_marglik_grad(const Dataset& d, const CoDataMatrix& Z,
                          const VectorXd& alpha, double log_sigma2);

// Smoothed Laplace penalty sum_g sqrt((log lambda_g - target)^2 + c) / scale.
double shrink_penalty(const VectorXd& log_lambdas, double target, double scale,
                      double smooth_c);

// Maximizes the marginal likelihood over (log lambda, log sigma2) for a
// single shared penalty. Uses a one-time eigendecomposition of X X^T, so
// every objective evaluation is O(n).
PenaltyFit fit_single_penalty(const Dataset& d, const RidgeFitOptions& opts = {});

// Maximizes over (alpha, log sigma2) with the analytic gradient, initialized
// from the single-penalty fit. With shrink.enabled, maximizes the penalized
// objective; requires Z to be a pure single grouping in that case.
PenaltyFit fit_codata_alpha(const Dataset& d, const CoDataMatrix& Z,
                            const ShrinkConfig& shrink = {},
                            const RidgeFitOptions& opts = {});

}  // namespace codashrink
