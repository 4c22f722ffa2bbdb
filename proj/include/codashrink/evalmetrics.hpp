#pragma once

#include <utility>
#include <vector>

#include "codashrink/types.hpp"

namespace codashrink {

struct SelectionEval {
  Index tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// Counts and F1 at a fixed selection; F1 = 0 when precision + recall = 0.
// Empty true support is an error (recall undefined).
SelectionEval f1_at(const std::vector<Index>& selected,
                    const std::vector<Index>& true_support, Index p);

struct ROCCurve {
  // (1 - specificity, sensitivity), one point per distinct score plus the
  // (0,0) and (1,1) endpoints
  std::vector<std::pair<double, double>> points;
  double auc = 0.0;
  bool degenerate = false;  // all scores identical: the diagonal
};

// Threshold sweep over distinct score values, descending; tied scores share
// one point, so the trapezoidal AUC equals the Mann-Whitney statistic with
// half-weight ties.
ROCCurve roc(const VectorXd& scores, const std::vector<Index>& true_support);

}  // namespace codashrink
