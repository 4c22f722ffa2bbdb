#include "codashrink/lbfgs.hpp"

#include <cmath>
#include <deque>

namespace codashrink {

namespace {

VectorXd project(VectorXd x, const VectorXd& lo, const VectorXd& hi) {
  if (lo.size()) x = x.cwiseMax(lo);
  if (hi.size()) x = x.cwiseMin(hi);
  return x;
}

// Gradient of the maximization problem with components pointing out of the
// box zeroed; its sup-norm is the stationarity measure.
VectorXd projected_gradient(const VectorXd& x, const VectorXd& g,
                            const VectorXd& lo, const VectorXd& hi) {
  VectorXd pg = g;
  for (Index i = 0; i < x.size(); ++i) {
    if (lo.size() && x[i] <= lo[i] && g[i] < 0.0) pg[i] = 0.0;
    if (hi.size() && x[i] >= hi[i] && g[i] > 0.0) pg[i] = 0.0;
  }
  return pg;
}

}  // namespace

LbfgsResult lbfgs_maximize(const Objective& f, const VectorXd& x0,
                           const LbfgsOptions& opts, const VectorXd& lower,
                           const VectorXd& upper) {
  LbfgsResult res;
  res.x = project(x0, lower, upper);
  res.grad.resize(x0.size());
  res.f = f(res.x, &res.grad);
  if (!std::isfinite(res.f))
    throw numeric_error("lbfgs: objective not finite at the start point");
  res.trace.push_back(res.f);

  std::deque<VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  VectorXd x = res.x, g = res.grad;
  double fx = res.f;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    const VectorXd pg = projected_gradient(x, g, lower, upper);
    if (pg.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
      res.converged = true;
      res.iterations = iter;
      break;
    }

    // two-loop recursion on the negated (minimization) gradient
    VectorXd q = -g;
    std::vector<double> alpha_coef(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha_coef[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha_coef[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const double gamma =
          s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha_coef[i] - beta) * s_hist[i];
    }
    VectorXd direction = -q;  // ascent direction for the maximization

    if (direction.dot(g) <= 0.0) direction = g;  // curvature went bad

    // Projected backtracking: accept the first step with an Armijo increase.
    // The unit step carries the gradient request since it usually wins.
    double step = 1.0;
    bool accepted = false;
    bool have_grad_at_new = false;
    VectorXd x_new, g_new(x.size());
    double f_new = fx;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
      x_new = project(x + step * direction, lower, upper);
      const VectorXd dx = x_new - x;
      if (dx.lpNorm<Eigen::Infinity>() == 0.0) break;
      const bool want_grad = bt == 0;
      f_new = f(x_new, want_grad ? &g_new : nullptr);
      have_grad_at_new = want_grad;
      if (std::isfinite(f_new) &&
          f_new >= fx + opts.armijo_c1 * step * g.dot(direction) &&
          f_new >= fx) {
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) {
      // steepest-ascent fallback before giving up
      bool fell_back = false;
      if (pg.lpNorm<Eigen::Infinity>() > 0.0) {
        step = 1.0 / std::max(1.0, pg.lpNorm<Eigen::Infinity>());
        for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
          x_new = project(x + step * pg, lower, upper);
          if ((x_new - x).lpNorm<Eigen::Infinity>() == 0.0) break;
          f_new = f(x_new, nullptr);
          have_grad_at_new = false;
          if (std::isfinite(f_new) && f_new > fx) {
            fell_back = true;
            break;
          }
          step *= opts.backtrack;
        }
      }
      if (!fell_back) {
        res.iterations = iter;
        break;  // no uphill progress possible; return best iterate
      }
    }

    if (!have_grad_at_new) f(x_new, &g_new);

    const VectorXd s = x_new - x;
    const VectorXd yv = -(g_new - g);  // minimization-space curvature pair
    const double sy = s.dot(yv);
    if (sy > 1e-10 * s.norm() * yv.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(yv);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    x = x_new;
    g = g_new;
    fx = f_new;
    res.trace.push_back(fx);
    res.iterations = iter + 1;
  }

  res.x = x;
  res.grad = g;
  res.f = fx;
  for (Index i = 0; i < x.size(); ++i) {
    if (lower.size() && x[i] <= lower[i]) res.at_bound = true;
    if (upper.size() && x[i] >= upper[i]) res.at_bound = true;
  }
  return res;
}

}  // namespace codashrink
