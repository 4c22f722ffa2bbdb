#include <doctest.h>

#include <cmath>

#include "codashrink/penalty_transfer.hpp"
#include "codashrink/weighted_lasso.hpp"
#include "test_helpers.hpp"

using namespace codashrink;
using namespace codashrink::testing;

namespace {

double objective(const WeightedLassoProblem& prob, const VectorXd& beta) {
  return 0.5 * (prob.y - prob.X * beta).squaredNorm() +
         prob.gamma.dot(beta.cwiseAbs());
}

// exhaustive grid minimizer over [-3,3]^p at the given resolution, for p <= 2
VectorXd grid_minimizer(const WeightedLassoProblem& prob, double resolution) {
  const Index p = prob.X.cols();
  REQUIRE(p <= 2);
  const MatrixXd gram = prob.X.transpose() * prob.X;
  const VectorXd xty = prob.X.transpose() * prob.y;
  const double yty = prob.y.squaredNorm();
  const auto steps = static_cast<Index>(std::llround(6.0 / resolution));
  auto value = [&](const VectorXd& b) {
    return 0.5 * (yty - 2.0 * b.dot(xty) + b.dot(gram * b)) +
           prob.gamma.dot(b.cwiseAbs());
  };
  VectorXd best = VectorXd::Zero(p);
  double best_val = value(best);
  VectorXd b(p);
  if (p == 1) {
    for (Index i = 0; i <= steps; ++i) {
      b[0] = -3.0 + resolution * static_cast<double>(i);
      const double v = value(b);
      if (v < best_val) {
        best_val = v;
        best = b;
      }
    }
  } else {
    for (Index i = 0; i <= steps; ++i) {
      b[0] = -3.0 + resolution * static_cast<double>(i);
      for (Index k = 0; k <= steps; ++k) {
        b[1] = -3.0 + resolution * static_cast<double>(k);
        const double v = value(b);
        if (v < best_val) {
          best_val = v;
          best = b;
        }
      }
    }
  }
  return best;
}

WeightedLassoProblem random_problem(Index n, Index p, std::uint64_t seed,
                                    double gamma_scale) {
  WeightedLassoProblem prob;
  prob.X = random_matrix(n, p, seed, 60);
  prob.y = random_vector(n, seed, 61);
  prob.gamma =
      gamma_scale * (random_vector(p, seed, 62).array().abs() + 0.2).matrix();
  return prob;
}

}  // namespace

TEST_SUITE_BEGIN("weighted_lasso");

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(3.0, 1.0) == 2.0);
  CHECK(soft_threshold(-3.0, 1.0) == -2.0);
  CHECK(soft_threshold(0.5, 1.0) == 0.0);
}

TEST_CASE("penalties above the correlations give the zero solution") {
  auto prob = random_problem(8, 5, 1, 0.0);
  const VectorXd corr = (prob.X.transpose() * prob.y).cwiseAbs();
  prob.gamma = corr.array() + 0.1;
  const auto fit = cd_fit(prob);
  CHECK(fit.converged);
  CHECK(fit.beta.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("single orthonormal feature has the closed form") {
  WeightedLassoProblem prob;
  prob.X = random_matrix(9, 1, 2, 63);
  prob.X /= prob.X.norm();
  prob.y = random_vector(9, 2, 64);
  prob.gamma = VectorXd::Constant(1, 1.0);
  const auto fit = cd_fit(prob);
  CHECK(fit.beta[0] ==
        doctest::Approx(soft_threshold(prob.X.col(0).dot(prob.y), 1.0))
            .epsilon(1e-12));
}

TEST_CASE("matches the exhaustive grid minimizer on tiny problems") {
  // the spec corpus: every p <= 2, n <= 6 fixture
  int fixtures = 0;
  for (Index p : {1, 2}) {
    for (Index n : {2, 4, 6}) {
      for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        auto prob = random_problem(n, p, 100 * seed + 10 * p + n, 0.8);
        const auto fit = cd_fit(prob);
        REQUIRE(fit.converged);
        const VectorXd brute = grid_minimizer(prob, 1e-3);
        CHECK(objective(prob, fit.beta) <= objective(prob, brute) + 1e-5);
        ++fixtures;
      }
    }
  }
  CHECK(fixtures == 12);
}

TEST_CASE("kkt certificates hold at convergence") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto prob = random_problem(20, 40, seed, 2.0);
    const auto fit = cd_fit(prob);
    REQUIRE(fit.converged);
    const VectorXd corr = prob.X.transpose() * (prob.y - prob.X * fit.beta);
    for (Index j = 0; j < 40; ++j) {
      if (fit.beta[j] == 0.0) {
        CHECK(std::abs(corr[j]) <= prob.gamma[j] + 1e-6);
      } else {
        CHECK(std::abs(corr[j] - prob.gamma[j] *
                                     (fit.beta[j] > 0 ? 1.0 : -1.0)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("objective is non-increasing across sweeps") {
  const auto prob = random_problem(15, 30, 77, 1.0);
  // re-run with increasing sweep budgets; the objective must not rise
  double last = objective(prob, VectorXd::Zero(30));
  for (int sweeps = 1; sweeps <= 6; ++sweeps) {
    CdOptions opts;
    opts.max_sweeps = sweeps;
    const auto fit = cd_fit(prob, nullptr, opts);
    const double now = objective(prob, fit.beta);
    CHECK(now <= last + 1e-12);
    last = now;
  }
}

TEST_CASE("path starts all-zero and orders entries by strength") {
  const auto prob = random_problem(12, 8, 5, 1.0);
  const CoefPath cp = path(prob);
  CHECK(cp.betas.row(0).cwiseAbs().maxCoeff() == 0.0);

  const VectorXd ratio =
      (prob.X.transpose() * prob.y).cwiseAbs().array() / prob.gamma.array();
  Index strongest;
  ratio.maxCoeff(&strongest);
  REQUIRE(cp.entry_order[strongest] != CoefPath::kNeverEntered);
  for (Index j = 0; j < 8; ++j)
    if (cp.entry_order[j] != CoefPath::kNeverEntered)
      CHECK(cp.entry_order[strongest] <= cp.entry_order[j]);
}

TEST_CASE("warm-started path equals cold fits") {
  const auto prob = random_problem(15, 25, 6, 1.0);
  const CoefPath cp = path(prob);
  for (int k : {20, 55, 99}) {
    WeightedLassoProblem scaled = prob;
    scaled.gamma = prob.gamma * cp.t_grid[k];
    const auto cold = cd_fit(scaled);
    CHECK((cold.beta - cp.betas.row(k).transpose()).lpNorm<Eigen::Infinity>() <
          1e-6);
  }
}

TEST_CASE("select_to_size contracts") {
  const auto prob = random_problem(20, 10, 7, 1.0);
  PathOptions opts;
  opts.t_min_ratio = 1e-5;
  const CoefPath cp = path(prob, opts);
  CHECK(select_to_size(cp, 0).empty());
  const auto all = select_to_size(cp, 10);
  CHECK(all.size() == 10);

  const auto five_a = select_to_size(cp, 5);
  const auto five_b = select_to_size(cp, 5);
  CHECK(five_a == five_b);

  // grid too short: only the all-zero point
  PathOptions tiny;
  tiny.grid_size = 1;
  const CoefPath short_path = path(prob, tiny);
  CHECK_THROWS_AS(select_to_size(short_path, 3), path_too_short);
}

TEST_CASE("single group degenerates to the plain lasso selection") {
  const Dataset d = planted_dataset(25, 40, 6, 0.8, 8);
  const GroupStructure groups = equal_blocks(40, 1);
  const SelectionFit gal = group_adaptive_lasso(d, groups, 10);
  const SelectionFit plain = plain_lasso_select(d, 10);
  CHECK(gal.selected == plain.selected);
}

TEST_CASE("pure noise still returns the forced size") {
  Dataset d;
  d.X = random_matrix(30, 50, 9, 65);
  d.y = random_vector(30, 9, 66);  // no signal at all
  const SelectionFit fit =
      group_adaptive_lasso(d, equal_blocks(50, 5), 12);
  CHECK(fit.selected.size() == 12);
}

TEST_CASE("zero-norm column is an error only when unpenalized") {
  WeightedLassoProblem prob = random_problem(6, 3, 10, 1.0);
  prob.X.col(1).setZero();
  CHECK_NOTHROW(cd_fit(prob));
  prob.gamma[1] = 0.0;
  CHECK_THROWS_AS(cd_fit(prob), numeric_error);
}

TEST_CASE("standardize_columns maps coefficients back by the sds") {
  auto prob = random_problem(30, 4, 11, 0.3);
  prob.X.col(2) *= 7.0;
  auto [scaled, sds] = standardize_columns(prob);
  for (Index j = 0; j < 4; ++j) {
    const double mean = scaled.X.col(j).mean();
    const double sd = std::sqrt(
        (scaled.X.col(j).array() - mean).square().sum() / (30 - 1));
    CHECK(sd == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(sds[2] > 6.0);
}

TEST_SUITE_END();
