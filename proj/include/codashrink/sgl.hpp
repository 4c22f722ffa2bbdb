#pragma once

#include <vector>

#include "codashrink/codata.hpp"
#include "codashrink/types.hpp"
#include "codashrink/weighted_lasso.hpp"

namespace codashrink {

// minimize 0.5 ||y - X beta||^2
//          + alpha_mix * lambda * ||beta||_1
//          + (1 - alpha_mix) * lambda * sum_g w_g ||beta_g||_2
struct SGLProblem {
  MatrixXd X;
  VectorXd y;
  GroupStructure groups;
  double lambda = 0.0;
  double alpha_mix = 0.95;
  VectorXd group_weights;  // empty = default sqrt(group size)

  void validate() const;
  VectorXd effective_weights() const;
};

// Subgradient test at beta_g = 0 given the residual with group g removed:
// ||soft(X_g^T r, alpha_mix * lambda)||_2 <= (1 - alpha_mix) * lambda * w_g.
bool group_zero_check(const SGLProblem& prob, int g, const VectorXd& residual);

// Smallest lambda whose solution is all-zero, by per-group bisection on the
// zero-check boundary.
double sgl_lambda_max(const SGLProblem& prob);

struct SglOptions {
  double block_tol = 1e-7;  // on max block change, times (1 + |beta|_inf)
  double kkt_tol = 1e-5;
  int max_sweeps = 10000;
  int max_inner = 2000;
  double inner_tol = 1e-9;
};

struct SglResult {
  VectorXd beta;
  bool converged = false;
  int sweeps = 0;
};

// Blockwise coordinate descent: per-group zero check, then a proximal
// gradient inner loop (soft-threshold then group shrink) with step
// backtracking against the block objective.
SglResult sgl_fit(const SGLProblem& prob, const VectorXd* warm_start = nullptr,
                  const SglOptions& opts = {});

// Largest blockwise KKT violation at beta.
double sgl_kkt_violation(const SGLProblem& prob, const VectorXd& beta);

// Lambda path from lambda_max down with warm starts; t_grid holds the
// lambda values. `prob.lambda` is ignored.
CoefPath sgl_path(const SGLProblem& prob, const PathOptions& opts = {},
                  const SglOptions& sgl_opts = {});

// Widens the grid until at least `needed` features enter (bounded attempts).
CoefPath sgl_path_until_entered(const SGLProblem& prob, Index needed,
                                PathOptions opts = {},
                                const SglOptions& sgl_opts = {});

// Lambda path from lambda_max down with warm starts, entry-order selection.
SelectionFit sgl_path_select(const Dataset& d, const GroupStructure& groups,
                             Index p_sel, double alpha_mix = 0.95,
                             const PathOptions& opts = {},
                             const SglOptions& sgl_opts = {});

}  // namespace codashrink
