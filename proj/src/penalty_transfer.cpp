#include "codashrink/penalty_transfer.hpp"

#include <cmath>

namespace codashrink {

VectorXd ridge_to_lasso_rates(const VectorXd& v) {
  if (v.size() == 0) throw data_error("ridge_to_lasso_rates: empty input");
  if (!(v.minCoeff() > 0.0))
    throw data_error("ridge_to_lasso_rates: variances must be > 0");
  return (2.0 / v.array()).sqrt();
}

namespace {

double clipped_mean(const VectorXd& v, double c, double eps, Index* clipped) {
  double sum = 0.0;
  Index nclip = 0;
  for (Index j = 0; j < v.size(); ++j) {
    double q = c * v[j];
    if (q < eps) {
      q = eps;
      ++nclip;
    } else if (q > 1.0 - eps) {
      q = 1.0 - eps;
      ++nclip;
    }
    sum += q;
  }
  if (clipped) *clipped = nclip;
  return sum / static_cast<double>(v.size());
}

}  // namespace

InclusionProbs ridge_to_inclusion_probs(const VectorXd& v, double q_bar,
                                        double eps) {
  const Index p = v.size();
  if (p == 0) throw data_error("ridge_to_inclusion_probs: empty input");
  if (!(eps > 0.0) || eps > 1e-3)
    throw data_error("ridge_to_inclusion_probs: eps must be in (0, 1e-3]");
  if (!(q_bar > 0.0) || !(q_bar < 1.0))
    throw data_error("ridge_to_inclusion_probs: q_bar must be in (0, 1)");
  if (v.minCoeff() < 0.0)
    throw data_error("ridge_to_inclusion_probs: variances must be >= 0");
  const double vsum = v.sum();
  if (!(vsum > 0.0))
    throw data_error("ridge_to_inclusion_probs: all variances are zero");
  if (q_bar < eps || q_bar > 1.0 - eps)
    throw data_error(
        "ridge_to_inclusion_probs: q_bar infeasible under clipping bounds");

  // q_j = clip(C v_j, eps, 1-eps); the clipped mean is continuous and
  // non-decreasing in C, so bisect, then solve the active linear piece
  // exactly so mean(q) = q_bar to machine precision.
  double c_lo = 0.0;
  double c_hi = q_bar * static_cast<double>(p) / vsum;
  while (clipped_mean(v, c_hi, eps, nullptr) < q_bar) c_hi *= 2.0;
  for (int it = 0; it < 200 && c_hi - c_lo > 1e-16 * c_hi; ++it) {
    const double mid = 0.5 * (c_lo + c_hi);
    if (clipped_mean(v, mid, eps, nullptr) < q_bar)
      c_lo = mid;
    else
      c_hi = mid;
  }
  double c = 0.5 * (c_lo + c_hi);

  // exact solve on the identified piece
  double free_sum = 0.0;
  Index n_lo = 0, n_hi = 0;
  for (Index j = 0; j < p; ++j) {
    const double q = c * v[j];
    if (q < eps)
      ++n_lo;
    else if (q > 1.0 - eps)
      ++n_hi;
    else
      free_sum += v[j];
  }
  if (free_sum > 0.0) {
    const double c_exact = (q_bar * static_cast<double>(p) -
                            static_cast<double>(n_lo) * eps -
                            static_cast<double>(n_hi) * (1.0 - eps)) /
                           free_sum;
    // accept only if the clip pattern is unchanged at the polished value
    Index n_lo2 = 0, n_hi2 = 0;
    double free2 = 0.0;
    for (Index j = 0; j < p; ++j) {
      const double q = c_exact * v[j];
      if (q < eps)
        ++n_lo2;
      else if (q > 1.0 - eps)
        ++n_hi2;
      else
        free2 += v[j];
    }
    if (c_exact > 0.0 && n_lo2 == n_lo && n_hi2 == n_hi) c = c_exact;
  }

  InclusionProbs out;
  out.q.resize(p);
  Index clipped = 0;
  for (Index j = 0; j < p; ++j) {
    double q = c * v[j];
    if (q < eps) {
      q = eps;
      ++clipped;
    } else if (q > 1.0 - eps) {
      q = 1.0 - eps;
      ++clipped;
    }
    out.q[j] = q;
  }
  const double mean = out.q.mean();
  if (std::abs(mean - q_bar) > 1e-10)
    throw numeric_error(
        "ridge_to_inclusion_probs: calibration failed to hit q_bar");
  out.calibration = {q_bar, clipped, c};
  return out;
}

}  // namespace codashrink
