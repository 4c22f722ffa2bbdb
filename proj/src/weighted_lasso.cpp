#include "codashrink/weighted_lasso.hpp"

#include <algorithm>
#include <cmath>

#include "codashrink/penalty_transfer.hpp"

namespace codashrink {

void WeightedLassoProblem::validate() const {
  if (X.rows() < 1 || X.cols() < 1) throw data_error("lasso: empty problem");
  if (y.size() != X.rows()) throw data_error("lasso: y length mismatch");
  if (gamma.size() != X.cols()) throw data_error("lasso: gamma length mismatch");
  if (!gamma.allFinite() || gamma.minCoeff() < 0.0)
    throw data_error("lasso: penalties must be finite and non-negative");
  if (gamma.maxCoeff() == 0.0 && X.cols() > X.rows())
    throw data_error("lasso: unpenalized problem with p > n");
}

namespace {

struct CdEngine {
  const MatrixXd& X;
  const VectorXd& y;
  VectorXd col_sq;  // ||x_j||^2

  explicit CdEngine(const WeightedLassoProblem& prob)
      : X(prob.X), y(prob.y) {
    col_sq = X.colwise().squaredNorm();
  }

  // One pass over the given coordinate set; returns max coefficient change.
  double sweep(const VectorXd& gamma, VectorXd& beta, VectorXd& r,
               const std::vector<Index>& coords) const {
    double max_change = 0.0;
    for (Index j : coords) {
      const double old = beta[j];
      if (col_sq[j] == 0.0) {
        if (gamma[j] == 0.0)
          throw numeric_error("cd_fit: zero-norm column with zero penalty");
        if (old != 0.0) {
          r += X.col(j) * old;
          beta[j] = 0.0;
          max_change = std::max(max_change, std::abs(old));
        }
        continue;
      }
      const double rho = X.col(j).dot(r) + old * col_sq[j];
      const double next = soft_threshold(rho, gamma[j]) / col_sq[j];
      const double change = next - old;
      if (change != 0.0) {
        r -= X.col(j) * change;
        beta[j] = next;
        max_change = std::max(max_change, std::abs(change));
      }
    }
    return max_change;
  }
};

}  // namespace

std::pair<WeightedLassoProblem, VectorXd> standardize_columns(
    const WeightedLassoProblem& prob) {
  WeightedLassoProblem out = prob;
  const Index n = prob.X.rows();
  VectorXd sds(prob.X.cols());
  for (Index j = 0; j < prob.X.cols(); ++j) {
    const double mean = prob.X.col(j).mean();
    const double var =
        (prob.X.col(j).array() - mean).square().sum() / std::max<Index>(n - 1, 1);
    sds[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    out.X.col(j) /= sds[j];
  }
  out.standardized = true;
  return {std::move(out), std::move(sds)};
}

double kkt_violation(const WeightedLassoProblem& prob, const VectorXd& beta) {
  const VectorXd r = prob.y - prob.X * beta;
  const VectorXd corr = prob.X.transpose() * r;
  double worst = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta[j] == 0.0)
      worst = std::max(worst, std::abs(corr[j]) - prob.gamma[j]);
    else
      worst = std::max(worst,
                       std::abs(corr[j] - prob.gamma[j] * (beta[j] > 0 ? 1.0 : -1.0)));
  }
  return worst;
}

CdResult cd_fit(const WeightedLassoProblem& prob, const VectorXd* warm_start,
                const CdOptions& opts) {
  prob.validate();
  const Index p = prob.X.cols();
  CdEngine engine(prob);

  CdResult res;
  res.beta = warm_start ? *warm_start : VectorXd::Zero(p);
  if (warm_start && warm_start->size() != p)
    throw data_error("cd_fit: warm start has wrong length");
  VectorXd r = prob.y - prob.X * res.beta;

  std::vector<Index> all(p);
  for (Index j = 0; j < p; ++j) all[j] = j;

  int sweeps = 0;
  while (sweeps < opts.max_sweeps) {
    // full pass
    double change = engine.sweep(prob.gamma, res.beta, r, all);
    ++sweeps;

    // active-set passes until stable
    std::vector<Index> active;
    for (Index j = 0; j < p; ++j)
      if (res.beta[j] != 0.0 || prob.gamma[j] == 0.0) active.push_back(j);
    while (sweeps < opts.max_sweeps) {
      const double tol = opts.change_tol *
                         (1.0 + res.beta.lpNorm<Eigen::Infinity>());
      const double c = engine.sweep(prob.gamma, res.beta, r, active);
      ++sweeps;
      if (c < tol) break;
    }

    const double tol = opts.change_tol *
                       (1.0 + res.beta.lpNorm<Eigen::Infinity>());
    if (change < tol && kkt_violation(prob, res.beta) <= opts.kkt_tol) {
      res.converged = true;
      break;
    }
  }
  res.sweeps = sweeps;
  return res;
}

Index CoefPath::entered_count() const {
  Index count = 0;
  for (Index e : entry_order)
    if (e != kNeverEntered) ++count;
  return count;
}

CoefPath path(const WeightedLassoProblem& prob, const PathOptions& opts) {
  prob.validate();
  if (prob.gamma.maxCoeff() <= 0.0)
    throw data_error("path: gamma must not be all zero");
  const Index p = prob.X.cols();

  const VectorXd corr0 = prob.X.transpose() * prob.y;
  double t_max = 0.0;
  for (Index j = 0; j < p; ++j)
    if (prob.gamma[j] > 0.0)
      t_max = std::max(t_max, std::abs(corr0[j]) / prob.gamma[j]);
  if (t_max <= 0.0) t_max = 1.0;  // X^T y = 0: every grid point solves to 0

  const int K = std::max(1, opts.grid_size);
  CoefPath out;
  out.t_grid.resize(K);
  for (int k = 0; k < K; ++k)
    out.t_grid[k] =
        K == 1 ? t_max
               : t_max * std::pow(opts.t_min_ratio,
                                  static_cast<double>(k) / (K - 1));
  out.betas = MatrixXd::Zero(K, p);
  out.entry_order.assign(static_cast<std::size_t>(p), CoefPath::kNeverEntered);

  // at t_max the solution is all-zero by construction
  VectorXd beta = VectorXd::Zero(p);
  Index entered = 0;
  WeightedLassoProblem scaled = prob;
  int computed = 1;
  for (int k = 1; k < K; ++k) {
    scaled.gamma = prob.gamma * out.t_grid[k];
    const CdResult fit = cd_fit(scaled, &beta, opts.cd);
    beta = fit.beta;
    out.betas.row(k) = beta.transpose();
    for (Index j = 0; j < p; ++j) {
      if (beta[j] != 0.0 &&
          out.entry_order[static_cast<std::size_t>(j)] ==
              CoefPath::kNeverEntered) {
        out.entry_order[static_cast<std::size_t>(j)] = k;
        ++entered;
      }
    }
    computed = k + 1;
    if (opts.stop_when_entered > 0 && entered >= opts.stop_when_entered) break;
  }
  if (computed < K) {
    out.t_grid.conservativeResize(computed);
    out.betas.conservativeResize(computed, p);
  }
  return out;
}

std::vector<Index> select_to_size(const CoefPath& path, Index p_sel) {
  const Index p = static_cast<Index>(path.entry_order.size());
  if (p_sel > p) throw data_error("select_to_size: p_sel exceeds p");
  if (p_sel == 0) return {};

  struct Entry {
    Index grid, j;
    double mag;
  };
  std::vector<Entry> entries;
  for (Index j = 0; j < p; ++j) {
    const Index k = path.entry_order[static_cast<std::size_t>(j)];
    if (k != CoefPath::kNeverEntered)
      entries.push_back({k, j, std::abs(path.betas(k, j))});
  }
  if (static_cast<Index>(entries.size()) < p_sel)
    throw path_too_short("select_to_size: only " +
                         std::to_string(entries.size()) + " of " +
                         std::to_string(p_sel) +
                         " requested features entered the path");
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.grid != b.grid) return a.grid < b.grid;
    if (a.mag != b.mag) return a.mag > b.mag;
    return a.j < b.j;
  });
  std::vector<Index> selected(static_cast<std::size_t>(p_sel));
  for (Index i = 0; i < p_sel; ++i)
    selected[static_cast<std::size_t>(i)] = entries[static_cast<std::size_t>(i)].j;
  return selected;
}

CoefPath path_until_entered(const WeightedLassoProblem& prob, Index needed,
                            PathOptions opts) {
  if (opts.stop_when_entered == 0) opts.stop_when_entered = needed;
  for (int attempt = 0;; ++attempt) {
    CoefPath cp = path(prob, opts);
    if (cp.entered_count() >= needed || attempt == 4) return cp;
    opts.t_min_ratio *= 1e-2;
    opts.grid_size += 50;
  }
}

namespace {

SelectionFit select_with_extension(const WeightedLassoProblem& prob,
                                   Index p_sel, const PathOptions& opts) {
  SelectionFit fit;
  CoefPath cp = path_until_entered(prob, p_sel, opts);
  fit.selected = select_to_size(cp, p_sel);  // throws if still short
  Index sel_grid = 0;
  for (Index j : fit.selected)
    sel_grid =
        std::max(sel_grid, cp.entry_order[static_cast<std::size_t>(j)]);
  fit.beta = cp.betas.row(sel_grid).transpose();
  fit.path = std::move(cp);
  fit.gamma = prob.gamma;
  return fit;
}

}  // namespace

SelectionFit group_adaptive_lasso(const Dataset& d, const GroupStructure& groups,
                                  Index p_sel, const ShrinkConfig& shrink,
                                  const PathOptions& opts) {
  d.validate();
  if (groups.p() != d.p())
    throw data_error("group_adaptive_lasso: group structure length mismatch");
  const CoDataMatrix Z =
      encode_codata({grouped_source(groups.assignments)}, d.p(), false);
  PenaltyFit pfit = fit_codata_alpha(d, Z, shrink);

  WeightedLassoProblem prob{d.X, d.y, ridge_to_lasso_rates(pfit.v), false};
  SelectionFit fit = select_with_extension(prob, p_sel, opts);
  fit.penalty_fit = std::move(pfit);
  return fit;
}

SelectionFit plain_lasso_select(const Dataset& d, Index p_sel,
                                const PathOptions& opts) {
  d.validate();
  WeightedLassoProblem prob{d.X, d.y, VectorXd::Ones(d.p()), false};
  return select_with_extension(prob, p_sel, opts);
}

}  // namespace codashrink
