#include <doctest.h>

#include "codashrink/evalmetrics.hpp"
#include "codashrink/rng.hpp"
#include "test_helpers.hpp"

using namespace codashrink;
using namespace codashrink::testing;

TEST_SUITE_BEGIN("evalmetrics");

TEST_CASE("f1 basics") {
  CHECK(f1_at({0, 1, 2}, {0, 1, 2}, 5).f1 == 1.0);
  CHECK(f1_at({0, 1}, {2, 3}, 5).f1 == 0.0);

  // |selected| = 50 with 25 hits against 150 true: P = .5, R = 1/6, F1 = .25
  std::vector<Index> selected, truth;
  for (Index j = 0; j < 150; ++j) truth.push_back(j);
  for (Index j = 0; j < 25; ++j) selected.push_back(j);
  for (Index j = 150; j < 175; ++j) selected.push_back(j);
  const auto e = f1_at(selected, truth, 500);
  CHECK(e.precision == 0.5);
  CHECK(e.recall == doctest::Approx(1.0 / 6.0));
  CHECK(e.f1 == doctest::Approx(0.25));
  CHECK(e.tp + e.fp + e.fn + e.tn == 500);

  CHECK(f1_at({}, {1}, 4).f1 == 0.0);
  CHECK_THROWS_AS(f1_at({0}, {}, 4), data_error);
  CHECK_THROWS_AS(f1_at({0, 0}, {1}, 4), data_error);
  CHECK_THROWS_AS(f1_at({9}, {1}, 4), data_error);
}

TEST_CASE("f1 is invariant under relabeling") {
  CounterRng rng(5, stream_id("test", "relabel"));
  const Index p = 60;
  std::vector<Index> sel, truth;
  for (Index j = 0; j < p; ++j) {
    if (rng.bernoulli(0.3)) sel.push_back(j);
    if (rng.bernoulli(0.2)) truth.push_back(j);
  }
  if (truth.empty()) truth.push_back(0);
  const double base = f1_at(sel, truth, p).f1;

  std::vector<Index> perm(p);
  for (Index j = 0; j < p; ++j) perm[j] = j;
  rng.shuffle(perm);
  auto remap = [&perm](std::vector<Index> v) {
    for (auto& j : v) j = perm[static_cast<std::size_t>(j)];
    return v;
  };
  CHECK(f1_at(remap(sel), remap(truth), p).f1 == base);
}

TEST_CASE("roc endpoints, perfect and reversed rankings") {
  VectorXd s(4);
  s << 0.9, 0.8, 0.2, 0.1;
  const auto perfect = roc(s, {0, 1});
  CHECK(perfect.auc == 1.0);
  CHECK(perfect.points.front() == std::pair<double, double>{0.0, 0.0});
  CHECK(perfect.points.back() == std::pair<double, double>{1.0, 1.0});
  CHECK(roc(s, {2, 3}).auc == 0.0);
}

TEST_CASE("hand-enumerated three-point curve") {
  VectorXd s(3);
  s << 0.9, 0.8, 0.3;
  const auto curve = roc(s, {0});
  REQUIRE(curve.points.size() == 4);
  CHECK(curve.points[0] == std::pair<double, double>{0.0, 0.0});
  CHECK(curve.points[1] == std::pair<double, double>{0.0, 1.0});
  CHECK(curve.points[2] == std::pair<double, double>{0.5, 1.0});
  CHECK(curve.points[3] == std::pair<double, double>{1.0, 1.0});
  CHECK(curve.auc == 1.0);
}

TEST_CASE("identical scores give the flagged diagonal") {
  const auto curve = roc(VectorXd::Ones(6), {1, 4});
  CHECK(curve.degenerate);
  CHECK(curve.auc == 0.5);
}

TEST_CASE("auc equals the pairwise mann-whitney statistic") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    CounterRng rng(seed, stream_id("test", "auc"));
    const Index p = 120;
    VectorXd scores(p);
    std::vector<Index> truth;
    for (Index j = 0; j < p; ++j) {
      // coarse grid forces plenty of ties
      scores[j] = std::floor(rng.uniform() * 8.0) / 8.0 +
                  (rng.bernoulli(0.3) ? 0.25 : 0.0);
      if (rng.bernoulli(0.35)) truth.push_back(j);
    }
    if (truth.empty()) truth.push_back(0);
    if (truth.size() == static_cast<std::size_t>(p)) truth.pop_back();

    std::vector<bool> is_signal(p, false);
    for (Index j : truth) is_signal[static_cast<std::size_t>(j)] = true;
    double pairs = 0.0, wins = 0.0;
    for (Index a = 0; a < p; ++a) {
      if (!is_signal[static_cast<std::size_t>(a)]) continue;
      for (Index b = 0; b < p; ++b) {
        if (is_signal[static_cast<std::size_t>(b)]) continue;
        pairs += 1.0;
        if (scores[a] > scores[b]) wins += 1.0;
        else if (scores[a] == scores[b]) wins += 0.5;
      }
    }
    const double mw = wins / pairs;
    CHECK(std::abs(roc(scores, truth).auc - mw) <= 1e-12);
  }
}

TEST_CASE("roc input validation") {
  VectorXd s(3);
  s << 1, 2, 3;
  CHECK_THROWS_AS(roc(s, {}), data_error);
  CHECK_THROWS_AS(roc(s, {0, 1, 2}), data_error);
}

TEST_SUITE_END();
