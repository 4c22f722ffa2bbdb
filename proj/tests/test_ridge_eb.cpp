#include <doctest.h>

#include <cmath>

#include "codashrink/ridge_eb.hpp"
#include "codashrink/rng.hpp"
#include "test_helpers.hpp"

using namespace codashrink;
using namespace codashrink::testing;

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// central finite differences of log_marglik composed with the link
VectorXd fd_gradient(const Dataset& d, const CoDataMatrix& Z,
                     const VectorXd& alpha, double log_sigma2, double h) {
  const Index C = Z.C();
  VectorXd g(C + 1);
  auto value = [&](const VectorXd& a, double ls2) {
    const VectorXd v = (-(Z.Z.transpose() * a)).array().exp();
    return log_marglik(d, v, std::exp(ls2));
  };
  for (Index c = 0; c < C; ++c) {
    VectorXd ap = alpha, am = alpha;
    ap[c] += h;
    am[c] -= h;
    g[c] = (value(ap, log_sigma2) - value(am, log_sigma2)) / (2.0 * h);
  }
  g[C] = (value(alpha, log_sigma2 + h) - value(alpha, log_sigma2 - h)) /
         (2.0 * h);
  return g;
}

CoDataMatrix random_codata(Index p, std::uint64_t seed) {
  CounterRng rng(seed, stream_id("test", "codata"));
  VectorXi groups(p);
  for (Index j = 0; j < p; ++j) groups[j] = 1 + static_cast<int>(rng.below(2));
  groups[0] = 1;
  if (p > 1) groups[1] = 2;
  VectorXd values(p);
  for (Index j = 0; j < p; ++j) values[j] = rng.normal();
  return encode_codata({grouped_source(groups), continuous_source(values)}, p,
                       true);
}

}  // namespace

TEST_SUITE_BEGIN("ridge_eb");

TEST_CASE("zero design gives the pure noise density") {
  Dataset d;
  d.X = MatrixXd::Zero(2, 1);
  d.y = VectorXd::Zero(2);
  const double ll = log_marglik(d, VectorXd::Constant(1, 3.7), 1.0);
  CHECK(ll == doctest::Approx(-kLog2Pi).epsilon(1e-12));
}

TEST_CASE("matches the explicit bivariate normal density") {
  // n = 2, p = 2: build Sigma by hand and evaluate the density directly
  Dataset d;
  d.X.resize(2, 2);
  d.X << 0.6, -1.1, 1.7, 0.4;
  d.y.resize(2);
  d.y << 0.9, -0.3;
  VectorXd v(2);
  v << 0.8, 2.5;
  const double sigma2 = 0.7;

  Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
  for (int j = 0; j < 2; ++j)
    S += v[j] * d.X.col(j) * d.X.col(j).transpose();
  S += sigma2 * Eigen::Matrix2d::Identity();
  const double det = S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
  Eigen::Matrix2d Sinv;
  Sinv << S(1, 1), -S(0, 1), -S(1, 0), S(0, 0);
  Sinv /= det;
  const double oracle =
      -0.5 * (2.0 * kLog2Pi + std::log(det) + d.y.dot(Sinv * d.y));

  CHECK(log_marglik(d, v, sigma2) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("equal per-feature variances match the eigenvalue route") {
  const Dataset d = random_dataset(12, 30, 5);
  const double v0 = 0.37, sigma2 = 1.21;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(d.X * d.X.transpose());
  const VectorXd lam = es.eigenvalues();
  const VectorXd w2 = (es.eigenvectors().transpose() * d.y).array().square();
  double oracle = -0.5 * 12 * kLog2Pi;
  for (Index i = 0; i < 12; ++i) {
    const double di = v0 * lam[i] + sigma2;
    oracle -= 0.5 * (std::log(di) + w2[i] / di);
  }
  CHECK(log_marglik(d, VectorXd::Constant(30, v0), sigma2) ==
        doctest::Approx(oracle).epsilon(1e-11));
}

TEST_CASE("analytic gradient matches central finite differences") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Dataset d = random_dataset(5, 8, seed);
    const CoDataMatrix Z = random_codata(8, seed);
    VectorXd alpha = 0.3 * random_vector(Z.C(), seed, 7);
    const double log_s2 = 0.2 * random_vector(1, seed, 8)[0];

    const VectorXd g = log_marglik_grad(d, Z, alpha, log_s2);
    const VectorXd g_fd = fd_gradient(d, Z, alpha, log_s2, 1e-5);
    for (Index c = 0; c < g.size(); ++c) {
      const double rel =
          std::abs(g[c] - g_fd[c]) / std::max(std::abs(g_fd[c]), 1e-8);
      CHECK(rel <= 1e-5);
      ++checked;
    }
  }
  CHECK(checked >= 20 * 3);
}

TEST_CASE("gradient vanishes at the single-penalty maximizer") {
  const Dataset d = planted_dataset(50, 20, 5, 0.4, 11);
  const PenaltyFit fit = fit_single_penalty(d);
  REQUIRE(fit.converged);
  const CoDataMatrix Z = CoDataMatrix::intercept_only(20);
  const VectorXd g =
      log_marglik_grad(d, Z, fit.alpha, std::log(fit.sigma2));
  CHECK(std::abs(g[0]) < 1e-6);
  CHECK(std::abs(g[1]) < 1e-6);
}

TEST_CASE("duplicate features with duplicate co-data leave the gradient unchanged under a swap") {
  Dataset d = random_dataset(6, 4, 21);
  d.X.col(2) = d.X.col(0);  // features 0 and 2 identical
  VectorXd values(4);
  values << 1.5, -0.7, 1.5, 0.2;  // identical co-data for 0 and 2
  const CoDataMatrix Z = encode_codata({continuous_source(values)}, 4, true);
  VectorXd alpha(2);
  alpha << 0.4, -0.3;

  Dataset swapped = d;
  swapped.X.col(0).swap(swapped.X.col(2));
  const VectorXd g1 = log_marglik_grad(d, Z, alpha, 0.1);
  const VectorXd g2 = log_marglik_grad(swapped, Z, alpha, 0.1);
  CHECK((g1 - g2).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("rotation invariance of the marginal likelihood") {
  const Dataset d = random_dataset(15, 40, 31);
  const MatrixXd Q =
      Eigen::HouseholderQR<MatrixXd>(random_matrix(15, 15, 32))
          .householderQ();
  Dataset rotated;
  rotated.X = Q * d.X;
  rotated.y = Q * d.y;
  VectorXd v = random_vector(40, 33).array().abs() + 0.2;
  const double a = log_marglik(d, v, 0.9);
  const double b = log_marglik(rotated, v, 0.9);
  CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
}

TEST_CASE("degenerate zero response returns on the numeric box") {
  Dataset d;
  d.X = random_matrix(10, 6, 41);
  d.y = VectorXd::Zero(10);
  const PenaltyFit fit = fit_single_penalty(d);
  CHECK(fit.at_bound);
  CHECK(std::isfinite(fit.logml));
  CHECK(fit.sigma2 > 0.0);
  CHECK(fit.v.minCoeff() > 0.0);
}

TEST_CASE("fitted hyperparameters dominate the truth") {
  // ridge data with known v0 and sigma0
  const Index n = 100, p = 500;
  CounterRng rng(51, stream_id("test", "ridge_recovery"));
  Dataset d;
  d.X = random_matrix(n, p, 52);
  const double v0 = 0.004, sigma0 = 1.0;
  VectorXd beta(p);
  for (Index j = 0; j < p; ++j) beta[j] = std::sqrt(v0) * rng.normal();
  d.y = d.X * beta;
  for (Index i = 0; i < n; ++i) d.y[i] += sigma0 * rng.normal();

  const PenaltyFit fit = fit_single_penalty(d);
  const double at_truth =
      log_marglik(d, VectorXd::Constant(p, v0), sigma0 * sigma0);
  CHECK(fit.logml >= at_truth - 1e-9);
}

TEST_CASE("single-penalty fit is bit-reproducible") {
  const Dataset d = planted_dataset(40, 80, 6, 0.5, 61);
  const PenaltyFit a = fit_single_penalty(d);
  const PenaltyFit b = fit_single_penalty(d);
  CHECK(a.alpha[0] == b.alpha[0]);
  CHECK(a.sigma2 == b.sigma2);
  CHECK(a.logml == b.logml);
}

TEST_CASE("intercept-only co-data fit nests the single-penalty fit") {
  const Dataset d = planted_dataset(40, 60, 5, 0.5, 71);
  const PenaltyFit single = fit_single_penalty(d);
  const PenaltyFit both =
      fit_codata_alpha(d, CoDataMatrix::intercept_only(60));
  CHECK(std::abs(single.logml - both.logml) < 1e-8);
}

TEST_CASE("objective trace is non-decreasing") {
  const Dataset d = planted_dataset(30, 50, 5, 0.6, 81);
  const CoDataMatrix Z = random_codata(50, 81);
  const PenaltyFit fit = fit_codata_alpha(d, Z);
  REQUIRE(fit.objective_trace.size() > 1);
  for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
    CHECK(fit.objective_trace[i] >= fit.objective_trace[i - 1]);
}

TEST_CASE("shrink penalty at the target is scale^-1 sqrt(c) per group") {
  // exactly one term: no summation rounding
  CHECK(shrink_penalty(VectorXd::Constant(1, 1.3), 1.3, 2.0, 1e-8) ==
        std::sqrt(1e-8) / 2.0);
  const double value = shrink_penalty(VectorXd::Constant(7, 1.3), 1.3, 2.0, 1e-8);
  CHECK(value == doctest::Approx(7.0 * std::sqrt(1e-8) / 2.0).epsilon(1e-15));
}

TEST_CASE("shrinkage pulls group penalties toward the common target") {
  // non-informative grouped co-data: a null-groups instance
  const Index n = 60, p = 120;
  const int G = 6;
  Dataset d;
  d.X = random_matrix(n, p, 91);
  VectorXd beta = VectorXd::Zero(p);
  CounterRng rng(91, stream_id("test", "nullbeta"));
  for (int k = 0; k < 12; ++k)
    beta[static_cast<Index>(rng.below(p))] = 0.4;
  d.y = d.X * beta + random_vector(n, 91, 9);
  VectorXi groups(p);
  for (Index j = 0; j < p; ++j) groups[j] = static_cast<int>(j / (p / G)) + 1;
  const CoDataMatrix Z = encode_codata({grouped_source(groups)}, p, false);

  const PenaltyFit plain = fit_codata_alpha(d, Z);
  ShrinkConfig shrink;
  shrink.enabled = true;
  const PenaltyFit targeted = fit_codata_alpha(d, Z, shrink);
  REQUIRE(std::isfinite(targeted.shrink_target));

  auto max_dev = [&](const PenaltyFit& fit) {
    double m = std::abs(fit.alpha[0] - targeted.shrink_target);
    for (Index g = 1; g < fit.alpha.size(); ++g)
      m = std::max(m, std::abs(fit.alpha[0] + fit.alpha[g] -
                               targeted.shrink_target));
    return m;
  };
  CHECK(max_dev(targeted) < max_dev(plain));
}

TEST_CASE("input validation") {
  const Dataset d = random_dataset(6, 4, 101);
  CHECK_THROWS_AS(log_marglik(d, VectorXd::Zero(4), 1.0), data_error);
  CHECK_THROWS_AS(log_marglik(d, VectorXd::Ones(4), 0.0), data_error);
  CHECK_THROWS_AS(log_marglik(d, VectorXd::Ones(3), 1.0), data_error);

  // rank-deficient Z: duplicated row
  CoDataMatrix Z = CoDataMatrix::intercept_only(4);
  Z.Z.conservativeResize(2, 4);
  Z.Z.row(1) = Z.Z.row(0);
  Z.row_labels.push_back("dup");
  Z.rows.push_back({CoDataMatrix::RowInfo::Continuous, 0, -1});
  CHECK_THROWS_AS(fit_codata_alpha(d, Z), data_error);

  // shrinkage demands a pure single grouping
  const CoDataMatrix mixed = random_codata(4, 102);
  ShrinkConfig shrink;
  shrink.enabled = true;
  CHECK_THROWS_AS(fit_codata_alpha(d, mixed, shrink), data_error);
}

TEST_SUITE_END();
