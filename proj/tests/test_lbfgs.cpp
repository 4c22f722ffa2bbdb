#include <doctest.h>

#include <cmath>

#include "codashrink/lbfgs.hpp"

using namespace codashrink;

TEST_SUITE_BEGIN("lbfgs");

TEST_CASE("maximizes a concave quadratic") {
  // f(x) = -(x - a)^T A (x - a), A positive definite
  MatrixXd A(3, 3);
  A << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
  VectorXd a(3);
  a << 1.0, -2.0, 0.5;
  auto f = [&](const VectorXd& x, VectorXd* g) {
    const VectorXd d = x - a;
    if (g) *g = -2.0 * (A * d);
    return -d.dot(A * d);
  };
  const auto res = lbfgs_maximize(f, VectorXd::Zero(3));
  CHECK(res.converged);
  CHECK((res.x - a).lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK(res.f == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("accepted objective values never decrease") {
  auto f = [](const VectorXd& x, VectorXd* g) {
    // smooth nonconvex bump landscape
    const double v = std::sin(3.0 * x[0]) - 0.1 * x[0] * x[0] +
                     std::cos(2.0 * x[1]) - 0.05 * x[1] * x[1];
    if (g) {
      (*g)[0] = 3.0 * std::cos(3.0 * x[0]) - 0.2 * x[0];
      (*g)[1] = -2.0 * std::sin(2.0 * x[1]) - 0.1 * x[1];
    }
    return v;
  };
  VectorXd x0(2);
  x0 << 2.2, -1.3;
  const auto res = lbfgs_maximize(f, x0);
  REQUIRE(res.trace.size() > 1);
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i] >= res.trace[i - 1]);
}

TEST_CASE("box constraints activate and are flagged") {
  // unconstrained max at x = 5, box caps it at 2
  auto f = [](const VectorXd& x, VectorXd* g) {
    if (g) (*g)[0] = -2.0 * (x[0] - 5.0);
    return -(x[0] - 5.0) * (x[0] - 5.0);
  };
  VectorXd lo(1), hi(1);
  lo << -10.0;
  hi << 2.0;
  const auto res = lbfgs_maximize(f, VectorXd::Zero(1), {}, lo, hi);
  CHECK(res.converged);  // projected gradient vanishes at the bound
  CHECK(res.at_bound);
  CHECK(res.x[0] == doctest::Approx(2.0));
}

TEST_CASE("handles a badly scaled valley") {
  // maximize the negated Rosenbrock function
  auto f = [](const VectorXd& x, VectorXd* g) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    if (g) {
      (*g)[0] = 2.0 * a + 400.0 * x[0] * b;
      (*g)[1] = -200.0 * b;
    }
    return -(a * a + 100.0 * b * b);
  };
  VectorXd x0(2);
  x0 << -1.2, 1.0;
  LbfgsOptions opts;
  opts.max_iterations = 2000;
  const auto res = lbfgs_maximize(f, x0, opts);
  CHECK(res.converged);
  CHECK((res.x - VectorXd::Ones(2)).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_SUITE_END();
