#pragma once

#include <string>
#include <vector>

#include "codashrink/types.hpp"

namespace codashrink {

enum class CoDataKind { Grouped, Continuous };

struct CoDataSource {
  CoDataKind kind = CoDataKind::Grouped;
  std::string label;
  VectorXi assignments;  // Grouped: group index per feature, contiguous 1..G
  VectorXd values;       // Continuous: one value per feature

  Index size() const {
    return kind == CoDataKind::Grouped ? assignments.size() : values.size();
  }
  // Validates contiguity 1..G (every group occurs) and returns G.
  int group_count() const;
  void validate() const;
};

CoDataSource grouped_source(VectorXi assignments, std::string label = "groups");
CoDataSource continuous_source(VectorXd values, std::string label = "continuous");

struct GroupStructure {
  VectorXi assignments;  // 1..G per feature
  VectorXi sizes;        // length G, sizes[g-1] = |{j : assignments[j] = g}|

  int G() const { return static_cast<int>(sizes.size()); }
  Index p() const { return assignments.size(); }
  std::vector<std::vector<Index>> group_indices() const;
};

// Fails on non-Grouped sources or non-contiguous group labels.
GroupStructure to_group_structure(const CoDataSource& source);
GroupStructure group_structure_from_assignments(const VectorXi& assignments);
// p features in G contiguous equal blocks; requires G | p.
GroupStructure equal_blocks(Index p, int G);

enum class CoDataWarning {
  InterceptOnly,  // encoding degenerated to the intercept row alone
};

struct CoDataMatrix {
  MatrixXd Z;  // C x p; first row all ones
  std::vector<std::string> row_labels;
  bool has_intercept = true;

  struct RowInfo {
    enum Kind { Intercept, Indicator, Continuous } kind = Intercept;
    int source = -1;  // index into the encoded source list
    int group = -1;   // group the indicator row marks (2..G), -1 otherwise
  };
  std::vector<RowInfo> rows;
  std::vector<CoDataWarning> warnings;

  Index C() const { return Z.rows(); }
  Index p() const { return Z.cols(); }

  // True when the rows are the intercept plus the indicators of exactly one
  // grouped source; the only shape targeted hyperparameter shrinkage accepts.
  bool pure_single_grouping() const;

  // For a pure single grouping, the per-feature group labels 1..G with group
  // 1 the intercept-absorbed reference group.
  GroupStructure grouping() const;

  static CoDataMatrix intercept_only(Index p);
};

// Builds Z: intercept row, then per Grouped source G-1 indicator rows (first
// group absorbed by the intercept), then per Continuous source one row,
// centered and scaled to unit sample sd when `standardize` is set.
CoDataMatrix encode_codata(const std::vector<CoDataSource>& sources, Index p,
                           bool standardize = true);

}  // namespace codashrink
