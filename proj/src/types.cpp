#include "codashrink/types.hpp"

namespace codashrink {

void Dataset::validate() const {
  if (X.rows() < 2) throw data_error("Dataset: need at least 2 samples");
  if (X.cols() < 1) throw data_error("Dataset: need at least 1 feature");
  if (y.size() != X.rows())
    throw data_error("Dataset: y length " + std::to_string(y.size()) +
                     " does not match n = " + std::to_string(X.rows()));
  if (!X.allFinite()) throw data_error("Dataset: X contains non-finite entries");
  if (!y.allFinite()) throw data_error("Dataset: y contains non-finite entries");
}

double Dataset::y_variance() const {
  const Index n = y.size();
  if (n < 2) return 0.0;
  const double mean = y.mean();
  return (y.array() - mean).square().sum() / static_cast<double>(n - 1);
}

Dataset Dataset::centered() const {
  Dataset out;
  out.X = X.rowwise() - X.colwise().mean();
  out.y = y.array() - y.mean();
  return out;
}

}  // namespace codashrink
