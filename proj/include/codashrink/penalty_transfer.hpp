#pragma once

#include "codashrink/types.hpp"

namespace codashrink {

// Second-moment matching to the double-exponential prior:
// Var(DE(rate)) = 2 / rate^2, so rate_j = sqrt(2 / v_j).
VectorXd ridge_to_lasso_rates(const VectorXd& v);

struct InclusionCalibration {
  double q_bar = 0.0;
  Index clipped_count = 0;
  double scale_C = 0.0;  // q_j = clip(C v_j)
};

struct InclusionProbs {
  VectorXd q;
  InclusionCalibration calibration;
};

// Spike-and-slab prior variance is q_j tau^2, so relative inclusion
// probabilities are proportional to v_j; the constant C is calibrated so the
// mean of the clipped probabilities equals q_bar exactly. tau^2 cancels.
InclusionProbs ridge_to_inclusion_probs(const VectorXd& v, double q_bar,
                                        double eps = 1e-6);

}  // namespace codashrink
