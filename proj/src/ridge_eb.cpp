#include "codashrink/ridge_eb.hpp"

#include <algorithm>
#include <cmath>

#include "codashrink/kernels.hpp"
#include "codashrink/lbfgs.hpp"

namespace codashrink {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

struct NumericBox {
  double sigma2_floor, sigma2_cap, v_floor, v_cap;

  static NumericBox from(const Dataset& d, const RidgeFitOptions& opts) {
    double vy = d.y_variance();
    if (!(vy > 0.0)) vy = 1.0;
    return {opts.sigma2_floor_rel * vy, opts.sigma2_cap_rel * vy,
            opts.v_floor_rel * vy, opts.v_cap_rel * vy};
  }
};

// Per-fit workspace for the n x n route. Value-only evaluations skip the
// triangular multi-solve, which halves their cost.
struct MargLikWork {
  MatrixXd sigma;  // X diag(v) X^T + sigma2 I, overwritten by its Cholesky
  Eigen::LLT<MatrixXd> llt;
  VectorXd v, t, s;
  // During fits a singular covariance returns -inf so the line search backs
  // off; the public log_marglik keeps its throwing contract.
  bool robust = false;

  // Returns log marginal likelihood; when grad is non-null, fills the
  // (C+1)-gradient with respect to (alpha, log sigma2). `clamped` marks
  // features whose v hit the numeric box (their gradient contribution is 0).
  double eval(const Dataset& d, const MatrixXd& Z, const VectorXd& alpha,
              double log_sigma2, const NumericBox& box, VectorXd* grad,
              bool* hit_clamp = nullptr) {
    const Index n = d.n();
    const Index p = d.p();
    const double sigma2 =
        std::clamp(std::exp(log_sigma2), box.sigma2_floor, box.sigma2_cap);

    v = (-(Z.transpose() * alpha)).array().exp();
    bool clamp = false;
    for (Index j = 0; j < p; ++j) {
      if (!(v[j] >= box.v_floor)) {  // catches underflow to 0
        v[j] = box.v_floor;
        clamp = true;
      } else if (v[j] > box.v_cap) {
        v[j] = box.v_cap;
        clamp = true;
      }
    }
    if (hit_clamp) *hit_clamp = clamp;

    sigma = kernels::weighted_gram(d.X, v);
    sigma.diagonal().array() += sigma2;
    llt.compute(sigma);
    if (llt.info() != Eigen::Success) {
      if (robust) {
        if (grad) grad->setZero(Z.rows() + 1);
        return -std::numeric_limits<double>::infinity();
      }
      throw numeric_error("log_marglik: covariance numerically singular");
    }

    const MatrixXd& L = llt.matrixLLT();
    double logdet = 0.0;
    for (Index i = 0; i < n; ++i) logdet += 2.0 * std::log(L(i, i));

    const VectorXd b = L.triangularView<Eigen::Lower>().solve(d.y);
    const double quad = b.squaredNorm();  // y^T Sigma^-1 y
    const double value = -0.5 * (n * kLog2Pi + logdet + quad);

    if (grad) {
      // d l / d v_j = -(t_j - s_j^2) / 2 with t_j = x_j^T Sigma^-1 x_j and
      // s_j = x_j^T Sigma^-1 y; the log link contributes dv_j/dalpha_c =
      // -z_cj v_j.
      const MatrixXd U = kernels::lower_solve_columns(L, d.X);
      kernels::column_quadratics(U, b, t, s);
      VectorXd u = v.array() * (t.array() - s.array().square());
      for (Index j = 0; j < p; ++j)
        if (v[j] <= box.v_floor || v[j] >= box.v_cap) u[j] = 0.0;
      grad->resize(Z.rows() + 1);
      grad->head(Z.rows()) = 0.5 * (Z * u);

      // d l / d log sigma2 = -sigma2 (tr(Sigma^-1) - ||Sigma^-1 y||^2) / 2
      const MatrixXd Linv = L.triangularView<Eigen::Lower>().solve(
          MatrixXd::Identity(n, n));
      const double trace_inv = Linv.squaredNorm();
      const VectorXd a = L.transpose().triangularView<Eigen::Upper>().solve(b);
      double g_s2 = -0.5 * sigma2 * (trace_inv - a.squaredNorm());
      if (sigma2 <= box.sigma2_floor || sigma2 >= box.sigma2_cap) g_s2 = 0.0;
      (*grad)[Z.rows()] = g_s2;
    }
    return value;
  }
};

// Single-penalty route: with v_j = v, Sigma = v Q Lam Q^T + sigma2 I shares
// eigenvectors with X X^T, so evaluations are O(n) after one decomposition.
struct SinglePenaltyWork {
  VectorXd eigs;  // eigenvalues of X X^T
  VectorXd w2;    // squared coordinates of y in the eigenbasis

  explicit SinglePenaltyWork(const Dataset& d) {
    const MatrixXd gram = d.X * d.X.transpose();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram);
    if (es.info() != Eigen::Success)
      throw numeric_error("fit_single_penalty: eigendecomposition failed");
    eigs = es.eigenvalues().cwiseMax(0.0);
    w2 = (es.eigenvectors().transpose() * d.y).array().square();
  }

  // x = (log lambda, log sigma2)
  double eval(const VectorXd& x, VectorXd* grad) const {
    const Index n = eigs.size();
    const double v = std::exp(-x[0]);
    const double sigma2 = std::exp(x[1]);
    double value = -0.5 * n * kLog2Pi;
    double dv = 0.0, ds2 = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double di = v * eigs[i] + sigma2;
      value -= 0.5 * (std::log(di) + w2[i] / di);
      const double common = 1.0 / di - w2[i] / (di * di);
      dv += eigs[i] * common;
      ds2 += common;
    }
    if (grad) {
      grad->resize(2);
      // d v / d log lambda = -v
      (*grad)[0] = 0.5 * v * dv;
      (*grad)[1] = -0.5 * sigma2 * ds2;
    }
    return value;
  }
};

// penalized objective gradient contribution for group-indicator Z
void add_shrink_gradient(const VectorXd& alpha, double target, double scale,
                         double smooth_c, VectorXd& grad) {
  const Index G = alpha.size();  // groups: 1 (intercept) + rows 1..C-1
  const double w = 1.0 / scale;
  for (Index g = 0; g < G; ++g) {
    const double log_lam = g == 0 ? alpha[0] : alpha[0] + alpha[g];
    const double diff = log_lam - target;
    const double slope = w * diff / std::sqrt(diff * diff + smooth_c);
    grad[0] -= slope;
    if (g > 0) grad[g] -= slope;
  }
}

double shrink_value(const VectorXd& alpha, double target, double scale,
                    double smooth_c) {
  VectorXd log_lams(alpha.size());
  for (Index g = 0; g < alpha.size(); ++g)
    log_lams[g] = g == 0 ? alpha[0] : alpha[0] + alpha[g];
  return shrink_penalty(log_lams, target, scale, smooth_c);
}

}  // namespace

double shrink_penalty(const VectorXd& log_lambdas, double target, double scale,
                      double smooth_c) {
  if (!(smooth_c > 0.0)) throw data_error("shrink_penalty: smooth_c must be > 0");
  if (!(scale > 0.0)) throw data_error("shrink_penalty: scale must be > 0");
  double sum = 0.0;
  for (Index g = 0; g < log_lambdas.size(); ++g) {
    const double diff = log_lambdas[g] - target;
    sum += std::sqrt(diff * diff + smooth_c);
  }
  return sum / scale;
}

double log_marglik(const Dataset& d, const VectorXd& v, double sigma2) {
  d.validate();
  if (v.size() != d.p()) throw data_error("log_marglik: v has wrong length");
  if (!(v.minCoeff() > 0.0))
    throw data_error("log_marglik: variances must be strictly positive");
  if (!(sigma2 > 0.0)) throw data_error("log_marglik: sigma2 must be > 0");

  const Index n = d.n();
  MatrixXd sigma = kernels::weighted_gram(d.X, v);
  sigma.diagonal().array() += sigma2;
  Eigen::LLT<MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw numeric_error("log_marglik: covariance numerically singular");
  const MatrixXd& L = llt.matrixLLT();
  double logdet = 0.0;
  for (Index i = 0; i < n; ++i) logdet += 2.0 * std::log(L(i, i));
  const double quad =
      L.triangularView<Eigen::Lower>().solve(d.y).squaredNorm();
  return -0.5 * (n * kLog2Pi + logdet + quad);
}

VectorXd log_marglik_grad(const Dataset& d, const CoDataMatrix& Z,
                          const VectorXd& alpha, double log_sigma2) {
  d.validate();
  if (Z.p() != d.p()) throw data_error("log_marglik_grad: Z has wrong width");
  if (alpha.size() != Z.C())
    throw data_error("log_marglik_grad: alpha has wrong length");
  // unbounded box: the public gradient is the pure chain-rule derivative
  const NumericBox box{0.0, std::numeric_limits<double>::infinity(), 0.0,
                       std::numeric_limits<double>::infinity()};
  MargLikWork work;
  VectorXd grad;
  work.eval(d, Z.Z, alpha, log_sigma2, box, &grad);
  return grad;
}

PenaltyFit fit_single_penalty(const Dataset& d, const RidgeFitOptions& opts) {
  d.validate();
  const NumericBox box = NumericBox::from(d, opts);
  const SinglePenaltyWork work(d);

  // moment start: half the response variance to signal, half to noise
  double vy = d.y_variance();
  if (!(vy > 0.0)) vy = 1.0;
  const double xss = std::max(d.X.squaredNorm(), 1e-300);
  const double v0 = std::clamp(0.5 * vy * d.n() / xss, box.v_floor, box.v_cap);
  const double s20 = 0.5 * vy;

  VectorXd x0(2), lo(2), hi(2);
  x0 << -std::log(v0), std::log(s20);
  lo << -std::log(box.v_cap), std::log(box.sigma2_floor);
  hi << -std::log(box.v_floor), std::log(box.sigma2_cap);

  LbfgsOptions lopts;
  lopts.max_iterations = opts.max_iterations;
  lopts.grad_tol = opts.grad_tol;
  const auto res = lbfgs_maximize(
      [&work](const VectorXd& x, VectorXd* g) { return work.eval(x, g); }, x0,
      lopts, lo, hi);

  PenaltyFit fit;
  fit.alpha = VectorXd::Constant(1, res.x[0]);
  fit.v = VectorXd::Constant(d.p(), std::exp(-res.x[0]));
  fit.sigma2 = std::exp(res.x[1]);
  fit.logml = res.f;
  fit.converged = res.converged;
  fit.iterations = res.iterations;
  fit.at_bound = res.at_bound;
  fit.objective_trace = res.trace;
  return fit;
}

PenaltyFit fit_codata_alpha(const Dataset& d, const CoDataMatrix& Z,
                            const ShrinkConfig& shrink,
                            const RidgeFitOptions& opts) {
  d.validate();
  if (Z.p() != d.p())
    throw data_error("fit_codata_alpha: Z width does not match p");
  const Index C = Z.C();
  {
    // reject rank-deficient Z rows
    Eigen::ColPivHouseholderQR<MatrixXd> qr(Z.Z.transpose());
    if (qr.rank() < C)
      throw data_error("fit_codata_alpha: co-data rows are rank deficient");
  }
  if (shrink.enabled && !Z.pure_single_grouping())
    throw data_error(
        "fit_codata_alpha: targeted shrinkage requires a single grouped "
        "co-data source");

  const NumericBox box = NumericBox::from(d, opts);
  const PenaltyFit single = fit_single_penalty(d, opts);
  double target = shrink.target_log_lambda;
  if (shrink.enabled && std::isnan(target)) target = single.alpha[0];

  VectorXd x0 = VectorXd::Zero(C + 1);
  x0[0] = single.alpha[0];
  x0[C] = std::log(single.sigma2);

  VectorXd lo = VectorXd::Constant(
      C + 1, -std::numeric_limits<double>::infinity());
  VectorXd hi =
      VectorXd::Constant(C + 1, std::numeric_limits<double>::infinity());
  lo[C] = std::log(box.sigma2_floor);
  hi[C] = std::log(box.sigma2_cap);

  MargLikWork work;
  work.robust = true;
  bool clamped_at_opt = false;
  auto objective = [&](const VectorXd& x, VectorXd* g) {
    const VectorXd alpha = x.head(C);
    bool clamp = false;
    double value = work.eval(d, Z.Z, alpha, x[C], box, g, &clamp);
    clamped_at_opt = clamp;
    if (shrink.enabled) {
      value -= shrink_value(alpha, target, shrink.scale, shrink.smooth_c);
      if (g) {
        VectorXd ga = g->head(C);
        add_shrink_gradient(alpha, target, shrink.scale, shrink.smooth_c, ga);
        g->head(C) = ga;
      }
    }
    return value;
  };

  LbfgsOptions lopts;
  lopts.max_iterations = opts.max_iterations;
  lopts.grad_tol = opts.grad_tol;
  const auto res = lbfgs_maximize(objective, x0, lopts, lo, hi);

  // re-evaluate at the returned point so v is not from a line-search probe
  objective(res.x, nullptr);

  PenaltyFit fit;
  fit.alpha = res.x.head(C);
  fit.v = work.v;
  fit.sigma2 = std::clamp(std::exp(res.x[C]), box.sigma2_floor, box.sigma2_cap);
  fit.logml = res.f;
  fit.converged = res.converged;
  fit.iterations = res.iterations;
  fit.at_bound = res.at_bound || clamped_at_opt;
  fit.objective_trace = res.trace;
  if (shrink.enabled) fit.shrink_target = target;
  return fit;
}

}  // namespace codashrink
