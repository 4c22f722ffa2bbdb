#include "codashrink/spike_slab_vb.hpp"

#include <cmath>

#include "codashrink/rng.hpp"

namespace codashrink {

void SSPrior::validate(Index p) const {
  if (q.size() != p) throw data_error("spike-slab prior: q has wrong length");
  for (Index j = 0; j < p; ++j)
    if (!(q[j] > 0.0) || !(q[j] < 1.0))
      throw data_error("spike-slab prior: q_j must lie in (0, 1)");
  if (!(tau2 > 0.0)) throw data_error("spike-slab prior: tau2 must be > 0");
}

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double logit(double x) { return std::log(x) - std::log1p(-x); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// E_q ||y - X beta||^2 given the factorized posterior: the residual at the
// posterior mean plus the per-feature variance pass-through.
double expected_rss(double rss_at_mean, const VectorXd& col_sq,
                    const VectorXd& incl, const VectorXd& mu,
                    const VectorXd& s2) {
  double extra = 0.0;
  for (Index j = 0; j < incl.size(); ++j) {
    const double m = incl[j] * mu[j];
    const double var_beta = incl[j] * (s2[j] + mu[j] * mu[j]) - m * m;
    extra += col_sq[j] * var_beta;
  }
  return rss_at_mean + extra;
}

double kl_term(const SSPrior& prior, const VectorXd& incl, const VectorXd& mu,
               const VectorXd& s2) {
  double kl = 0.0;
  for (Index j = 0; j < incl.size(); ++j) {
    const double a = incl[j];
    const double q = prior.q[j];
    if (a > 0.0) kl += a * std::log(a / q);
    if (a < 1.0) kl += (1.0 - a) * std::log((1.0 - a) / (1.0 - q));
    kl += a * (0.5 * std::log(prior.tau2 / s2[j]) +
               (s2[j] + mu[j] * mu[j]) / (2.0 * prior.tau2) - 0.5);
  }
  return kl;
}

double elbo_from_parts(Index n, double sigma2, double e_rss, double kl) {
  return -0.5 * static_cast<double>(n) * (kLog2Pi + std::log(sigma2)) -
         e_rss / (2.0 * sigma2) - kl;
}

}  // namespace

double elbo(const Dataset& d, const SSPrior& prior, const VBPosterior& post) {
  const Index p = d.X.cols();
  if (d.y.size() != d.X.rows()) throw data_error("elbo: y length mismatch");
  prior.validate(p);
  if (post.incl.size() != p || post.mu.size() != p || post.s2.size() != p)
    throw data_error("elbo: posterior has wrong length");
  if (!(post.sigma2 > 0.0)) throw data_error("elbo: sigma2 must be > 0");
  for (Index j = 0; j < p; ++j)
    if (!(post.s2[j] > 0.0)) throw data_error("elbo: s2 must be > 0");

  const VectorXd mean = post.incl.cwiseProduct(post.mu);
  const double rss = (d.y - d.X * mean).squaredNorm();
  const VectorXd col_sq = d.X.colwise().squaredNorm();
  const double e_rss = expected_rss(rss, col_sq, post.incl, post.mu, post.s2);
  const double value = elbo_from_parts(d.y.size(), post.sigma2, e_rss,
                                       kl_term(prior, post.incl, post.mu, post.s2));
  if (!std::isfinite(value)) throw numeric_error("elbo: non-finite value");
  return value;
}

VBPosterior vb_fit(const Dataset& d, const SSPrior& prior, Sigma2Mode mode,
                   double sigma2_value, const VbOptions& opts) {
  d.validate();
  const Index n = d.n();
  const Index p = d.p();
  prior.validate(p);
  if (!(opts.tol > 0.0)) throw data_error("vb_fit: tol must be > 0");
  if (mode == Sigma2Mode::Fixed && !(sigma2_value > 0.0))
    throw data_error("vb_fit: fixed sigma2 must be > 0");

  const VectorXd col_sq = d.X.colwise().squaredNorm();
  VectorXd logit_q(p);
  for (Index j = 0; j < p; ++j) logit_q[j] = logit(prior.q[j]);

  VBPosterior post;
  post.incl = prior.q;
  post.mu = VectorXd::Zero(p);
  post.s2 = VectorXd::Zero(p);
  post.sigma2 = mode == Sigma2Mode::Fixed
                    ? sigma2_value
                    : (opts.sigma2_init > 0.0
                           ? opts.sigma2_init
                           : std::max(0.5 * d.y_variance(), 1e-12));

  // r tracks y - X (incl . mu); mu is 0 at the start
  VectorXd r = d.y;

  std::vector<Index> order(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) order[static_cast<std::size_t>(j)] = j;
  CounterRng order_rng(opts.order_seed, stream_id("vb", "sweep_order"));

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    if (opts.random_order) order_rng.shuffle(order);

    double max_incl_change = 0.0;
    for (Index j : order) {
      const double m_old = post.incl[j] * post.mu[j];
      // x_j^T r_minus_j without forming r_minus_j
      const double corr = d.X.col(j).dot(r) + m_old * col_sq[j];

      const double s2j =
          post.sigma2 / (col_sq[j] + post.sigma2 / prior.tau2);
      const double muj = s2j / post.sigma2 * corr;
      const double lo = logit_q[j] +
                        0.5 * std::log(s2j / prior.tau2) +
                        muj * muj / (2.0 * s2j);
      const double aj = sigmoid(lo);

      max_incl_change = std::max(max_incl_change, std::abs(aj - post.incl[j]));
      post.s2[j] = s2j;
      post.mu[j] = muj;
      post.incl[j] = aj;

      const double m_new = aj * muj;
      if (m_new != m_old) r -= d.X.col(j) * (m_new - m_old);
    }

    if ((sweep + 1) % opts.recompute_every == 0)
      r = d.y - d.X * post.incl.cwiseProduct(post.mu);

    double e_rss = expected_rss(r.squaredNorm(), col_sq, post.incl, post.mu,
                                post.s2);
    if (mode == Sigma2Mode::Estimate) {
      post.sigma2 = std::max(e_rss / static_cast<double>(n), 1e-300);
    }
    const double value = elbo_from_parts(
        n, post.sigma2, e_rss, kl_term(prior, post.incl, post.mu, post.s2));
    if (!std::isfinite(value))
      throw numeric_error("vb_fit: non-finite ELBO (degenerate inputs)");
    post.elbo_trace.push_back(value);
    post.sweeps = sweep + 1;

    if (max_incl_change < opts.tol) {
      post.converged = true;
      break;
    }
  }

  // exact residual for the final trace entry so elbo() reproduces it
  r = d.y - d.X * post.incl.cwiseProduct(post.mu);
  if (!post.elbo_trace.empty()) {
    const double e_rss =
        expected_rss(r.squaredNorm(), col_sq, post.incl, post.mu, post.s2);
    post.elbo_trace.back() = elbo_from_parts(
        n, post.sigma2, e_rss, kl_term(prior, post.incl, post.mu, post.s2));
  }
  return post;
}

GuidedSSResult guided_ss_pipeline(const Dataset& d,
                                  const std::vector<CoDataSource>& sources,
                                  double q_bar, double tau2, Sigma2Mode mode,
                                  double sigma2_value,
                                  const GuidedSSOptions& opts) {
  d.validate();
  if (!(q_bar > 0.0) || !(q_bar < 1.0))
    throw data_error("guided_ss_pipeline: q_bar must be in (0, 1)");
  if (!(tau2 > 0.0)) throw data_error("guided_ss_pipeline: tau2 must be > 0");

  const Dataset work = opts.center ? d.centered() : d;

  GuidedSSResult out;
  out.Z = encode_codata(sources, d.p(), true);
  out.penalty_fit = fit_codata_alpha(work, out.Z, ShrinkConfig{}, opts.ridge);
  out.probs = ridge_to_inclusion_probs(out.penalty_fit.v, q_bar, opts.eps);
  out.posterior = vb_fit(work, SSPrior{out.probs.q, tau2}, mode, sigma2_value,
                         opts.vb);
  return out;
}

}  // namespace codashrink
