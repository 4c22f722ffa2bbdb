#pragma once

#include <optional>
#include <vector>

#include "codashrink/codata.hpp"
#include "codashrink/ridge_eb.hpp"
#include "codashrink/types.hpp"

namespace codashrink {

inline double soft_threshold(double z, double g) {
  if (z > g) return z - g;
  if (z < -g) return z + g;
  return 0.0;
}

// minimize 0.5 ||y - X beta||^2 + sum_j gamma_j |beta_j|
struct WeightedLassoProblem {
  MatrixXd X;
  VectorXd y;
  VectorXd gamma;  // per-feature penalties, >= 0
  bool standardized = false;

  void validate() const;
};

struct CdOptions {
  double change_tol = 1e-7;  // on max coefficient change, times (1 + |beta|_inf)
  double kkt_tol = 1e-6;
  int max_sweeps = 100000;
};

struct CdResult {
  VectorXd beta;
  bool converged = false;
  int sweeps = 0;
};

// Cyclic coordinate descent with active-set sweeps and a full KKT pass as
// the convergence certificate.
CdResult cd_fit(const WeightedLassoProblem& prob,
                const VectorXd* warm_start = nullptr,
                const CdOptions& opts = {});

// Copy of the problem with columns scaled to unit sample sd, for real data
// with arbitrary feature scales. Coefficients on the scaled problem map back
// as beta_j / sd_j. Constant columns are left untouched.
std::pair<WeightedLassoProblem, VectorXd> standardize_columns(
    const WeightedLassoProblem& prob);

// Largest KKT violation: max over j of |x_j^T r| - gamma_j for zero
// coefficients and |x_j^T r - gamma_j sign(beta_j)| for nonzero ones.
double kkt_violation(const WeightedLassoProblem& prob, const VectorXd& beta);

struct CoefPath {
  VectorXd t_grid;  // descending penalty multipliers
  MatrixXd betas;   // |grid| x p
  // grid index at which each feature first becomes nonzero
  std::vector<Index> entry_order;
  static constexpr Index kNeverEntered = -1;

  Index entered_count() const;
};

struct PathOptions {
  int grid_size = 100;
  double t_min_ratio = 1e-3;
  // stop once this many features have entered (0 = never); entry order of
  // everything selected so far is unaffected
  Index stop_when_entered = 0;
  CdOptions cd;
};

// Penalty path gamma -> t * gamma for t log-spaced from t_max (the smallest
// multiplier with an all-zero solution) down to t_min_ratio * t_max, warm
// started. Features with gamma_j = 0 are unpenalized and may be nonzero at
// every grid point.
CoefPath path(const WeightedLassoProblem& prob, const PathOptions& opts = {});

// Same, but widens the grid (smaller t_min_ratio, more points) until at
// least `needed` features have entered, up to a bounded number of attempts.
CoefPath path_until_entered(const WeightedLassoProblem& prob, Index needed,
                            PathOptions opts = {});

// First p_sel features by entry order; ties at one grid index broken by
// larger |beta| there, then lower feature index. Throws path_too_short when
// fewer than p_sel features ever enter.
std::vector<Index> select_to_size(const CoefPath& path, Index p_sel);

struct SelectionFit {
  std::vector<Index> selected;
  VectorXd beta;  // coefficients at the grid point where selection completed
  CoefPath path;
  PenaltyFit penalty_fit;  // empty for plain-lasso fits
  VectorXd gamma;
};

// Chains the group-indicator empirical-Bayes fit, the variance-matched
// double-exponential rates, the path, and size-forced selection. The path
// grid is extended automatically when p_sel features have not entered.
SelectionFit group_adaptive_lasso(const Dataset& d, const GroupStructure& groups,
                                  Index p_sel, const ShrinkConfig& shrink = {},
                                  const PathOptions& opts = {});

// Uniform-penalty lasso baseline with the same path/selection machinery.
SelectionFit plain_lasso_select(const Dataset& d, Index p_sel,
                                const PathOptions& opts = {});

}  // namespace codashrink
