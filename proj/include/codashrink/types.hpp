#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace codashrink {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

// Inputs violate a documented contract (bad file, dimension mismatch,
// out-of-range parameter). Maps to CLI exit code 2.
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: singular covariance, iteration budget exhausted where
// the contract requires convergence. Maps to CLI exit code 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Regularization path ended before enough features entered; callers extend
// the grid and retry.
struct path_too_short : numeric_error {
  using numeric_error::numeric_error;
};

struct Dataset {
  MatrixXd X;  // n x p, rows are samples
  VectorXd y;  // length n

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }

  // n >= 2, p >= 1, y length n, all entries finite.
  void validate() const;

  // Sample variance of y (ddof = 1); 0 for a constant response.
  double y_variance() const;

  // Copy with column means of X and the mean of y removed.
  Dataset centered() const;
};

}  // namespace codashrink
