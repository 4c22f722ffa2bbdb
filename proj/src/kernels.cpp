#include "codashrink/kernels.hpp"

#include <cmath>
#include <vector>

namespace codashrink::kernels {

namespace {
// Block sizes are fixed so the partition (and thus floating-point order)
// never depends on the thread count.
constexpr Index kColBlock = 512;
constexpr Index kSolveBlock = 256;
}  // namespace

MatrixXd scale_columns(const MatrixXd& X, const VectorXd& c) {
  MatrixXd out(X.rows(), X.cols());
  const Index p = X.cols();
  const Index nblocks = (p + kColBlock - 1) / kColBlock;
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < nblocks; ++b) {
    const Index j0 = b * kColBlock;
    const Index m = std::min(kColBlock, p - j0);
    out.middleCols(j0, m) =
        X.middleCols(j0, m) * c.segment(j0, m).asDiagonal();
  }
  return out;
}

MatrixXd weighted_gram(const MatrixXd& X, const VectorXd& w) {
  const Index n = X.rows();
  const Index p = X.cols();
  const MatrixXd Xs = scale_columns(X, w.array().sqrt().matrix());
  const Index nblocks = (p + kColBlock - 1) / kColBlock;
  std::vector<MatrixXd> partial(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < nblocks; ++b) {
    const Index j0 = b * kColBlock;
    const Index m = std::min(kColBlock, p - j0);
    MatrixXd& s = partial[static_cast<std::size_t>(b)];
    s = MatrixXd::Zero(n, n);
    s.selfadjointView<Eigen::Lower>().rankUpdate(Xs.middleCols(j0, m));
  }
  MatrixXd gram = MatrixXd::Zero(n, n);
  for (const auto& s : partial)
    gram.triangularView<Eigen::Lower>() += s;
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  return gram;
}

MatrixXd lower_solve_columns(const MatrixXd& L, const MatrixXd& B) {
  MatrixXd out = B;
  const Index p = B.cols();
  const Index nblocks = (p + kSolveBlock - 1) / kSolveBlock;
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < nblocks; ++b) {
    const Index j0 = b * kSolveBlock;
    const Index m = std::min(kSolveBlock, p - j0);
    auto block = out.middleCols(j0, m);
    L.triangularView<Eigen::Lower>().solveInPlace(block);
  }
  return out;
}

void column_quadratics(const MatrixXd& U, const VectorXd& b, VectorXd& t,
                       VectorXd& s) {
  const Index p = U.cols();
  t.resize(p);
  s.resize(p);
  const Index nblocks = (p + kColBlock - 1) / kColBlock;
#pragma omp parallel for schedule(static)
  for (Index blk = 0; blk < nblocks; ++blk) {
    const Index j0 = blk * kColBlock;
    const Index m = std::min(kColBlock, p - j0);
    for (Index j = j0; j < j0 + m; ++j) {
      t[j] = U.col(j).squaredNorm();
      s[j] = U.col(j).dot(b);
    }
  }
}

namespace ref {

MatrixXd scale_columns(const MatrixXd& X, const VectorXd& c) {
  return X * c.asDiagonal();
}

MatrixXd weighted_gram(const MatrixXd& X, const VectorXd& w) {
  return X * w.asDiagonal() * X.transpose();
}

MatrixXd lower_solve_columns(const MatrixXd& L, const MatrixXd& B) {
  return L.triangularView<Eigen::Lower>().solve(B);
}

void column_quadratics(const MatrixXd& U, const VectorXd& b, VectorXd& t,
                       VectorXd& s) {
  t = U.colwise().squaredNorm();
  s = U.transpose() * b;
}

}  // namespace ref

}  // namespace codashrink::kernels
