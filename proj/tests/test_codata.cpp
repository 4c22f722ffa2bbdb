#include <doctest.h>

#include "codashrink/codata.hpp"
#include "codashrink/rng.hpp"

using namespace codashrink;

namespace {

Eigen::FullPivLU<MatrixXd> lu_of(const MatrixXd& m) {
  Eigen::FullPivLU<MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return lu;
}

}  // namespace

TEST_SUITE_BEGIN("codata");

TEST_CASE("grouped indicator encoding, first group absorbed") {
  VectorXi a(4);
  a << 1, 1, 2, 2;
  const auto Z = encode_codata({grouped_source(a)}, 4, true);
  REQUIRE(Z.C() == 2);
  CHECK(Z.Z.row(0) == Eigen::RowVector4d(1, 1, 1, 1));
  CHECK(Z.Z.row(1) == Eigen::RowVector4d(0, 0, 1, 1));
  CHECK(Z.pure_single_grouping());
  CHECK(Z.warnings.empty());
}

TEST_CASE("continuous source is centered and scaled to unit sample sd") {
  VectorXd v(3);
  v << 1, 2, 3;
  const auto Z = encode_codata({continuous_source(v)}, 3, true);
  REQUIRE(Z.C() == 2);
  CHECK(Z.Z(1, 0) == doctest::Approx(-1.0));
  CHECK(Z.Z(1, 1) == doctest::Approx(0.0));
  CHECK(Z.Z(1, 2) == doctest::Approx(1.0));
}

TEST_CASE("two-group plus continuous pair gives three rows") {
  const Index p = 10000;
  VectorXi groups(p);
  for (Index j = 0; j < p; ++j) groups[j] = j < 500 ? 2 : 1;
  VectorXd logp(p);
  CounterRng rng(3, 14);
  for (Index j = 0; j < p; ++j) logp[j] = std::log(rng.uniform());
  const auto Z =
      encode_codata({grouped_source(groups), continuous_source(logp)}, p, true);
  CHECK(Z.C() == 3);
  CHECK(Z.rows[0].kind == CoDataMatrix::RowInfo::Intercept);
  CHECK(Z.rows[1].kind == CoDataMatrix::RowInfo::Indicator);
  CHECK(Z.rows[2].kind == CoDataMatrix::RowInfo::Continuous);
  CHECK_FALSE(Z.pure_single_grouping());
}

TEST_CASE("encoding errors") {
  VectorXi a(4);
  a << 1, 1, 2, 2;
  CHECK_THROWS_AS(encode_codata({grouped_source(a)}, 5, true), data_error);
  CHECK_THROWS_AS(encode_codata({}, 4, true), data_error);
  CHECK_THROWS_AS(
      encode_codata({continuous_source(VectorXd::Ones(4))}, 4, true),
      data_error);  // constant source cannot be standardized
  // single-group source alone: allowed but flagged
  const auto Z = encode_codata({grouped_source(VectorXi::Ones(4))}, 4, true);
  REQUIRE(Z.warnings.size() == 1);
  CHECK(Z.warnings[0] == CoDataWarning::InterceptOnly);
}

TEST_CASE("to_group_structure") {
  VectorXi a(3);
  a << 1, 1, 2;
  auto gs = to_group_structure(grouped_source(a));
  CHECK(gs.G() == 2);
  CHECK(gs.sizes[0] == 2);
  CHECK(gs.sizes[1] == 1);

  VectorXi b(3);
  b << 1, 2, 3;
  gs = to_group_structure(grouped_source(b));
  CHECK(gs.sizes == VectorXi::Ones(3));

  VectorXi c(2);
  c << 2, 2;  // group 1 missing: labels must be contiguous
  CHECK_THROWS_AS(to_group_structure(grouped_source(c)), data_error);
  CHECK_THROWS_AS(to_group_structure(continuous_source(VectorXd::Zero(2))),
                  data_error);
}

TEST_CASE("permuting features permutes Z columns identically") {
  const Index p = 40;
  CounterRng rng(17, 1);
  VectorXi groups(p);
  VectorXd values(p);
  for (Index j = 0; j < p; ++j) {
    groups[j] = 1 + static_cast<int>(rng.below(3));
    values[j] = rng.normal();
  }
  // ensure contiguity
  groups[0] = 1;
  groups[1] = 2;
  groups[2] = 3;
  const auto Z = encode_codata(
      {grouped_source(groups), continuous_source(values)}, p, true);

  std::vector<Index> perm(p);
  for (Index j = 0; j < p; ++j) perm[j] = j;
  rng.shuffle(perm);
  VectorXi pg(p);
  VectorXd pv(p);
  for (Index j = 0; j < p; ++j) {
    pg[j] = groups[perm[j]];
    pv[j] = values[perm[j]];
  }
  const auto Zp =
      encode_codata({grouped_source(pg), continuous_source(pv)}, p, true);
  for (Index j = 0; j < p; ++j) {
    // indicator rows permute exactly; the standardized row only up to the
    // summation order of the mean/sd reduction
    CHECK((Zp.Z.col(j) - Z.Z.col(perm[j])).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(Zp.Z(1, j) == Z.Z(1, perm[j]));
  }
}

TEST_CASE("intercept plus indicators span the one-hot column space") {
  VectorXi a(7);
  a << 1, 2, 3, 2, 1, 3, 3;
  const auto Z = encode_codata({grouped_source(a)}, 7, true);
  const int G = 3;
  MatrixXd onehot = MatrixXd::Zero(G, 7);
  for (Index j = 0; j < 7; ++j) onehot(a[j] - 1, j) = 1.0;

  CHECK(lu_of(Z.Z).rank() == G);
  MatrixXd stacked(Z.C() + G, 7);
  stacked << Z.Z, onehot;
  CHECK(lu_of(stacked).rank() == G);  // no new directions: same span
}

TEST_CASE("grouping recovers assignments from a pure single grouping") {
  VectorXi a(6);
  a << 2, 1, 3, 3, 2, 1;
  const auto Z = encode_codata({grouped_source(a)}, 6, true);
  const auto gs = Z.grouping();
  CHECK(gs.G() == 3);
  // indicator rows are groups 2..G in source order; group 1 is the reference
  for (Index j = 0; j < 6; ++j)
    CHECK(gs.assignments[j] == a[j]);
}

TEST_SUITE_END();
