#include "codashrink/sgl.hpp"

#include <algorithm>
#include <cmath>

namespace codashrink {

void SGLProblem::validate() const {
  if (X.rows() < 1 || X.cols() < 1) throw data_error("sgl: empty problem");
  if (y.size() != X.rows()) throw data_error("sgl: y length mismatch");
  if (groups.p() != X.cols()) throw data_error("sgl: group structure mismatch");
  if (!(alpha_mix >= 0.0) || !(alpha_mix <= 1.0))
    throw data_error("sgl: alpha_mix must be in [0, 1]");
  if (!(lambda >= 0.0)) throw data_error("sgl: lambda must be >= 0");
  if (group_weights.size() &&
      (group_weights.size() != groups.G() || group_weights.minCoeff() <= 0.0))
    throw data_error("sgl: group weights must be positive, one per group");
}

VectorXd SGLProblem::effective_weights() const {
  if (group_weights.size()) return group_weights;
  return groups.sizes.cast<double>().array().sqrt();
}

namespace {

VectorXd soft_threshold_vec(const VectorXd& z, double g) {
  VectorXd out(z.size());
  for (Index i = 0; i < z.size(); ++i) out[i] = soft_threshold(z[i], g);
  return out;
}

struct GroupData {
  std::vector<std::vector<Index>> indices;
  std::vector<MatrixXd> Xg;       // gathered columns per group
  std::vector<double> lipschitz;  // ||X_g||_2^2 with safety headroom
  VectorXd weights;

  GroupData(const MatrixXd& X, const GroupStructure& gs, const VectorXd& w)
      : indices(gs.group_indices()), weights(w) {
    const int G = gs.G();
    Xg.resize(static_cast<std::size_t>(G));
    lipschitz.resize(static_cast<std::size_t>(G));
    for (int g = 0; g < G; ++g) {
      const auto& idx = indices[static_cast<std::size_t>(g)];
      MatrixXd& m = Xg[static_cast<std::size_t>(g)];
      m.resize(X.rows(), static_cast<Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k)
        m.col(static_cast<Index>(k)) = X.col(idx[k]);
      lipschitz[static_cast<std::size_t>(g)] = operator_norm_sq(m);
    }
  }

  static double operator_norm_sq(const MatrixXd& m) {
    // power iteration on X^T X with a deterministic start
    const Index q = m.cols();
    if (q == 0) return 0.0;
    VectorXd v = VectorXd::Ones(q) / std::sqrt(static_cast<double>(q));
    double eig = 0.0;
    for (int it = 0; it < 100; ++it) {
      VectorXd next = m.transpose() * (m * v);
      const double norm = next.norm();
      if (norm == 0.0) return 0.0;
      next /= norm;
      const double new_eig = next.dot(m.transpose() * (m * next));
      if (std::abs(new_eig - eig) <= 1e-12 * std::abs(new_eig)) {
        eig = new_eig;
        break;
      }
      eig = new_eig;
      v = next;
    }
    return eig * 1.05;  // headroom; the inner loop backtracks anyway
  }
};

double block_objective(const MatrixXd& Xg, const VectorXd& rg,
                       const VectorXd& bg, double l1, double l2) {
  return 0.5 * (rg - Xg * bg).squaredNorm() + l1 * bg.lpNorm<1>() +
         l2 * bg.norm();
}

bool nonzero(const VectorXd& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) return true;
  return false;
}

// prox of step * (l1 ||.||_1 + l2 ||.||_2): soft-threshold then group shrink
VectorXd sgl_prox(const VectorXd& u, double step, double l1, double l2) {
  VectorXd a = soft_threshold_vec(u, step * l1);
  const double norm = a.norm();
  if (norm <= step * l2) return VectorXd::Zero(u.size());
  return a * (1.0 - step * l2 / norm);
}

}  // namespace

bool group_zero_check(const SGLProblem& prob, int g, const VectorXd& residual) {
  prob.validate();
  if (g < 1 || g > prob.groups.G())
    throw data_error("group_zero_check: group index out of range");
  if (residual.size() != prob.X.rows())
    throw data_error("group_zero_check: residual length mismatch");
  const VectorXd w = prob.effective_weights();
  const auto idx = prob.groups.group_indices()[static_cast<std::size_t>(g - 1)];
  VectorXd corr(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    corr[static_cast<Index>(k)] = prob.X.col(idx[k]).dot(residual);
  const VectorXd thr = soft_threshold_vec(corr, prob.alpha_mix * prob.lambda);
  return thr.norm() <= (1.0 - prob.alpha_mix) * prob.lambda * w[g - 1];
}

double sgl_lambda_max(const SGLProblem& prob) {
  prob.validate();
  const VectorXd w = prob.effective_weights();
  const auto groups = prob.groups.group_indices();
  double lam_max = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    VectorXd corr(static_cast<Index>(groups[g].size()));
    for (std::size_t k = 0; k < groups[g].size(); ++k)
      corr[static_cast<Index>(k)] = prob.X.col(groups[g][k]).dot(prob.y);
    double lam_g;
    if (prob.alpha_mix >= 1.0) {
      lam_g = corr.cwiseAbs().maxCoeff();
    } else if (prob.alpha_mix <= 0.0) {
      lam_g = corr.norm() / w[static_cast<Index>(g)];
    } else {
      // zero-check boundary is monotone in lambda: bisect
      double lo = 0.0;
      double hi = corr.norm() / ((1.0 - prob.alpha_mix) * w[static_cast<Index>(g)]);
      for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double lhs =
            soft_threshold_vec(corr, prob.alpha_mix * mid).norm();
        if (lhs <= (1.0 - prob.alpha_mix) * mid * w[static_cast<Index>(g)])
          hi = mid;
        else
          lo = mid;
      }
      lam_g = hi;
    }
    lam_max = std::max(lam_max, lam_g);
  }
  return lam_max;
}

double sgl_kkt_violation(const SGLProblem& prob, const VectorXd& beta) {
  const VectorXd r = prob.y - prob.X * beta;
  const VectorXd w = prob.effective_weights();
  const auto groups = prob.groups.group_indices();
  const double l1 = prob.alpha_mix * prob.lambda;
  double worst = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& idx = groups[g];
    VectorXd bg(static_cast<Index>(idx.size()));
    VectorXd corr(static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      bg[static_cast<Index>(k)] = beta[idx[k]];
      corr[static_cast<Index>(k)] = prob.X.col(idx[k]).dot(r);
    }
    const double l2 = (1.0 - prob.alpha_mix) * prob.lambda * w[static_cast<Index>(g)];
    const double bnorm = bg.norm();
    if (bnorm == 0.0) {
      worst = std::max(worst, soft_threshold_vec(corr, l1).norm() - l2);
    } else {
      for (Index k = 0; k < bg.size(); ++k) {
        if (bg[k] == 0.0)
          worst = std::max(worst, std::abs(corr[k]) - l1);
        else
          worst = std::max(
              worst, std::abs(corr[k] - l1 * (bg[k] > 0 ? 1.0 : -1.0) -
                              l2 * bg[k] / bnorm));
      }
    }
  }
  return worst;
}

SglResult sgl_fit(const SGLProblem& prob, const VectorXd* warm_start,
                  const SglOptions& opts) {
  prob.validate();
  const Index p = prob.X.cols();
  const VectorXd w = prob.effective_weights();
  GroupData gd(prob.X, prob.groups, w);
  const int G = prob.groups.G();

  SglResult res;
  res.beta = warm_start ? *warm_start : VectorXd::Zero(p);
  if (warm_start && warm_start->size() != p)
    throw data_error("sgl_fit: warm start has wrong length");
  VectorXd r = prob.y - prob.X * res.beta;

  const double l1 = prob.alpha_mix * prob.lambda;
  int sweeps = 0;
  while (sweeps < opts.max_sweeps) {
    double max_change = 0.0;
    for (int g = 0; g < G; ++g) {
      const auto& idx = gd.indices[static_cast<std::size_t>(g)];
      const MatrixXd& Xg = gd.Xg[static_cast<std::size_t>(g)];
      const double l2 = (1.0 - prob.alpha_mix) * prob.lambda * w[g];

      VectorXd bg(static_cast<Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k)
        bg[static_cast<Index>(k)] = res.beta[idx[k]];
      const bool bg_nonzero = nonzero(bg);

      VectorXd rg = r;
      if (bg_nonzero) rg += Xg * bg;

      // group-level zero check
      const VectorXd corr = Xg.transpose() * rg;
      VectorXd bg_new;
      if (soft_threshold_vec(corr, l1).norm() <= l2) {
        bg_new = VectorXd::Zero(bg.size());
      } else {
        // proximal gradient on the block with objective backtracking
        bg_new = bg;
        double L = std::max(gd.lipschitz[static_cast<std::size_t>(g)], 1e-12);
        double obj = block_objective(Xg, rg, bg_new, l1, l2);
        for (int inner = 0; inner < opts.max_inner; ++inner) {
          const VectorXd grad = Xg.transpose() * (Xg * bg_new - rg);
          VectorXd candidate;
          double cand_obj;
          for (;;) {
            candidate = sgl_prox(bg_new - grad / L, 1.0 / L, l1, l2);
            cand_obj = block_objective(Xg, rg, candidate, l1, l2);
            if (cand_obj <= obj + 1e-12 * (1.0 + std::abs(obj))) break;
            L *= 2.0;
            if (L > 1e18) {  // step cannot improve; hold position
              candidate = bg_new;
              cand_obj = obj;
              break;
            }
          }
          const double step_change =
              (candidate - bg_new).lpNorm<Eigen::Infinity>();
          bg_new = candidate;
          obj = cand_obj;
          if (step_change <
              opts.inner_tol * (1.0 + bg_new.lpNorm<Eigen::Infinity>()))
            break;
        }
      }

      const double change = (bg_new - bg).lpNorm<Eigen::Infinity>();
      if (change > 0.0) {
        r = nonzero(bg_new) ? VectorXd(rg - Xg * bg_new) : rg;
        for (std::size_t k = 0; k < idx.size(); ++k)
          res.beta[idx[k]] = bg_new[static_cast<Index>(k)];
        max_change = std::max(max_change, change);
      }
    }
    ++sweeps;
    const double tol =
        opts.block_tol * (1.0 + res.beta.lpNorm<Eigen::Infinity>());
    if (max_change < tol &&
        sgl_kkt_violation(prob, res.beta) <= opts.kkt_tol) {
      res.converged = true;
      break;
    }
  }
  res.sweeps = sweeps;
  return res;
}

CoefPath sgl_path(const SGLProblem& base, const PathOptions& opts,
                  const SglOptions& sgl_opts) {
  base.validate();
  const Index p = base.X.cols();
  const double lam_max = sgl_lambda_max(base);
  if (!(lam_max > 0.0))
    throw numeric_error("sgl_path: X^T y = 0, path is degenerate");

  const int K = std::max(1, opts.grid_size);
  CoefPath cp;
  cp.t_grid.resize(K);
  for (int k = 0; k < K; ++k)
    cp.t_grid[k] =
        K == 1 ? lam_max
               : lam_max * std::pow(opts.t_min_ratio,
                                    static_cast<double>(k) / (K - 1));
  cp.betas = MatrixXd::Zero(K, p);
  cp.entry_order.assign(static_cast<std::size_t>(p), CoefPath::kNeverEntered);

  VectorXd beta = VectorXd::Zero(p);
  Index entered = 0;
  int computed = 1;
  SGLProblem prob = base;
  for (int k = 1; k < K; ++k) {
    prob.lambda = cp.t_grid[k];
    const SglResult fit = sgl_fit(prob, &beta, sgl_opts);
    beta = fit.beta;
    cp.betas.row(k) = beta.transpose();
    for (Index j = 0; j < p; ++j) {
      if (beta[j] != 0.0 && cp.entry_order[static_cast<std::size_t>(j)] ==
                                CoefPath::kNeverEntered) {
        cp.entry_order[static_cast<std::size_t>(j)] = k;
        ++entered;
      }
    }
    computed = k + 1;
    if (opts.stop_when_entered > 0 && entered >= opts.stop_when_entered) break;
  }
  if (computed < K) {
    cp.t_grid.conservativeResize(computed);
    cp.betas.conservativeResize(computed, p);
  }
  return cp;
}

CoefPath sgl_path_until_entered(const SGLProblem& prob, Index needed,
                                PathOptions opts, const SglOptions& sgl_opts) {
  if (opts.stop_when_entered == 0) opts.stop_when_entered = needed;
  for (int attempt = 0;; ++attempt) {
    CoefPath cp = sgl_path(prob, opts, sgl_opts);
    if (cp.entered_count() >= needed || attempt == 4) return cp;
    opts.t_min_ratio *= 1e-2;
    opts.grid_size += 50;
  }
}

SelectionFit sgl_path_select(const Dataset& d, const GroupStructure& groups,
                             Index p_sel, double alpha_mix,
                             const PathOptions& opts,
                             const SglOptions& sgl_opts) {
  d.validate();
  if (groups.p() != d.p())
    throw data_error("sgl_path_select: group structure length mismatch");
  if (p_sel > d.p()) throw data_error("sgl_path_select: p_sel exceeds p");

  SGLProblem base{d.X, d.y, groups, 0.0, alpha_mix, VectorXd()};
  CoefPath cp = sgl_path_until_entered(base, p_sel, opts, sgl_opts);

  SelectionFit sel;
  sel.selected = select_to_size(cp, p_sel);
  Index sel_grid = 0;
  for (Index j : sel.selected)
    sel_grid = std::max(sel_grid, cp.entry_order[static_cast<std::size_t>(j)]);
  sel.beta = cp.betas.row(sel_grid).transpose();
  sel.path = std::move(cp);
  return sel;
}

}  // namespace codashrink
