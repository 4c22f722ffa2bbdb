#include "codashrink/evalmetrics.hpp"

#include <algorithm>
#include <unordered_set>

namespace codashrink {

namespace {

std::unordered_set<Index> as_set(const std::vector<Index>& idx, Index p,
                                 const char* what) {
  std::unordered_set<Index> s;
  for (Index j : idx) {
    if (j < 0 || j >= p)
      throw data_error(std::string(what) + ": index out of range");
    if (!s.insert(j).second)
      throw data_error(std::string(what) + ": duplicate index");
  }
  return s;
}

}  // namespace

SelectionEval f1_at(const std::vector<Index>& selected,
                    const std::vector<Index>& true_support, Index p) {
  const auto sel = as_set(selected, p, "f1_at selected");
  const auto truth = as_set(true_support, p, "f1_at true_support");
  if (truth.empty()) throw data_error("f1_at: empty true support");

  SelectionEval e;
  for (Index j : sel)
    truth.count(j) ? ++e.tp : ++e.fp;
  e.fn = static_cast<Index>(truth.size()) - e.tp;
  e.tn = p - e.tp - e.fp - e.fn;
  e.precision = sel.empty() ? 0.0
                            : static_cast<double>(e.tp) /
                                  static_cast<double>(sel.size());
  e.recall = static_cast<double>(e.tp) / static_cast<double>(truth.size());
  e.f1 = e.precision + e.recall > 0.0
             ? 2.0 * e.precision * e.recall / (e.precision + e.recall)
             : 0.0;
  return e;
}

ROCCurve roc(const VectorXd& scores, const std::vector<Index>& true_support) {
  const Index p = scores.size();
  if (!scores.allFinite()) throw data_error("roc: scores must be finite");
  const auto truth = as_set(true_support, p, "roc true_support");
  const Index n_pos = static_cast<Index>(truth.size());
  const Index n_neg = p - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw data_error("roc: need both signal and null features");

  std::vector<Index> order(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) order[static_cast<std::size_t>(j)] = j;
  std::sort(order.begin(), order.end(),
            [&scores](Index a, Index b) { return scores[a] > scores[b]; });

  ROCCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  double auc = 0.0;
  Index tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t k = i;
    Index d_tp = 0, d_fp = 0;
    while (k < order.size() && scores[order[k]] == scores[order[i]]) {
      truth.count(order[k]) ? ++d_tp : ++d_fp;
      ++k;
    }
    const double sens0 = static_cast<double>(tp) / n_pos;
    tp += d_tp;
    fp += d_fp;
    const double sens1 = static_cast<double>(tp) / n_pos;
    const double dfpr = static_cast<double>(d_fp) / n_neg;
    auc += dfpr * 0.5 * (sens0 + sens1);  // trapezoid through tie blocks
    curve.points.emplace_back(static_cast<double>(fp) / n_neg, sens1);
    i = k;
  }
  curve.auc = auc;
  curve.degenerate = curve.points.size() == 2;  // single distinct score
  return curve;
}

}  // namespace codashrink
