#pragma once

#include <cstdint>
#include <vector>

#include "codashrink/codata.hpp"
#include "codashrink/penalty_transfer.hpp"
#include "codashrink/ridge_eb.hpp"
#include "codashrink/types.hpp"

namespace codashrink {

// beta_j ~ (1 - q_j) delta_0 + q_j N(0, tau2)
struct SSPrior {
  VectorXd q;
  double tau2 = 0.25;

  void validate(Index p) const;
};

struct VBPosterior {
  VectorXd incl;  // posterior inclusion probabilities
  VectorXd mu;    // slab conditional means
  VectorXd s2;    // slab conditional variances
  double sigma2 = 0.0;
  std::vector<double> elbo_trace;  // one entry per sweep, non-decreasing
  bool converged = false;
  int sweeps = 0;
};

enum class Sigma2Mode { Fixed, Estimate };

struct VbOptions {
  double tol = 1e-6;  // on max change in incl per sweep
  int max_sweeps = 1000;
  // full residual recomputation cadence to bound incremental drift
  int recompute_every = 50;
  bool random_order = false;
  std::uint64_t order_seed = 0;
  double sigma2_init = 0.0;  // Estimate mode; 0 = var(y)/2
};

// Coordinate-ascent mean-field updates:
//   s_j^2 = sigma2 / (||x_j||^2 + sigma2 / tau2)
//   mu_j  = (s_j^2 / sigma2) x_j^T r_minus_j
//   logit(incl_j) = logit(q_j) + log(s_j / tau) + mu_j^2 / (2 s_j^2)
// with sigma2 updated each sweep by its ELBO-maximizing closed form when
// mode is Estimate.
VBPosterior vb_fit(const Dataset& d, const SSPrior& prior, Sigma2Mode mode,
                   double sigma2_value = 1.0, const VbOptions& opts = {});

// Exact mean-field evidence lower bound at the given posterior. Accepts
// p = 0 (empty model), where it reduces to the Gaussian log-likelihood of y
// under N(0, sigma2 I).
double elbo(const Dataset& d, const SSPrior& prior, const VBPosterior& post);

struct GuidedSSResult {
  VBPosterior posterior;
  CoDataMatrix Z;
  PenaltyFit penalty_fit;
  InclusionProbs probs;
};

struct GuidedSSOptions {
  double eps = 1e-6;       // inclusion probability clip
  bool center = true;      // center X columns and y before all fits
  VbOptions vb;
  RidgeFitOptions ridge;
};

// End-to-end guided pipeline: encode co-data, fit the ridge hyperparameters,
// transfer to inclusion probabilities with mean q_bar, fit the
// spike-and-slab model.
GuidedSSResult guided_ss_pipeline(const Dataset& d,
                                  const std::vector<CoDataSource>& sources,
                                  double q_bar, double tau2,
                                  Sigma2Mode mode = Sigma2Mode::Estimate,
                                  double sigma2_value = 1.0,
                                  const GuidedSSOptions& opts = {});

}  // namespace codashrink
