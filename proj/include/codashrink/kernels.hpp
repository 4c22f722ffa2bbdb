#pragma once

#include "codashrink/types.hpp"

namespace codashrink::kernels {

// Production kernels. Work is partitioned into fixed-size index blocks and
// the blocks are distributed over OpenMP threads; partial results combine in
// block order. Results are therefore identical for any thread count,
// including 1.

// X with column j scaled by c[j].
MatrixXd scale_columns(const MatrixXd& X, const VectorXd& c);

// X diag(w) X^T, w >= 0. Dominant cost of the marginal-likelihood value.
MatrixXd weighted_gram(const MatrixXd& X, const VectorXd& w);

// L^{-1} B for lower-triangular L. Dominant cost of the gradient.
MatrixXd lower_solve_columns(const MatrixXd& L, const MatrixXd& B);

// t[j] = ||U_j||^2 and s[j] = U_j . b per column.
void column_quadratics(const MatrixXd& U, const VectorXd& b, VectorXd& t,
                       VectorXd& s);

// Serial reference implementations, kept for the test suite and the kernel
// benchmark. Straight Eigen expressions, no blocking.
namespace ref {

MatrixXd scale_columns(const MatrixXd& X, const VectorXd& c);
MatrixXd weighted_gram(const MatrixXd& X, const VectorXd& w);
MatrixXd lower_solve_columns(const MatrixXd& L, const MatrixXd& B);
void column_quadratics(const MatrixXd& U, const VectorXd& b, VectorXd& t,
                       VectorXd& s);

}  // namespace ref

}  // namespace codashrink::kernels
