#include "codashrink/codata.hpp"

#include <cmath>

namespace codashrink {

int CoDataSource::group_count() const {
  if (kind != CoDataKind::Grouped)
    throw data_error("co-data source '" + label + "' is not grouped");
  if (assignments.size() == 0)
    throw data_error("co-data source '" + label + "' is empty");
  const int G = assignments.maxCoeff();
  if (assignments.minCoeff() < 1)
    throw data_error("co-data source '" + label + "': group indices must be >= 1");
  VectorXi counts = VectorXi::Zero(G);
  for (Index j = 0; j < assignments.size(); ++j) counts[assignments[j] - 1]++;
  for (int g = 0; g < G; ++g)
    if (counts[g] == 0)
      throw data_error("co-data source '" + label + "': group " +
                       std::to_string(g + 1) + " missing (labels must be contiguous 1..G)");
  return G;
}

void CoDataSource::validate() const {
  if (kind == CoDataKind::Grouped) {
    group_count();
  } else {
    if (values.size() == 0)
      throw data_error("co-data source '" + label + "' is empty");
    if (!values.allFinite())
      throw data_error("co-data source '" + label + "' has non-finite values");
  }
}

CoDataSource grouped_source(VectorXi assignments, std::string label) {
  CoDataSource s;
  s.kind = CoDataKind::Grouped;
  s.label = std::move(label);
  s.assignments = std::move(assignments);
  return s;
}

CoDataSource continuous_source(VectorXd values, std::string label) {
  CoDataSource s;
  s.kind = CoDataKind::Continuous;
  s.label = std::move(label);
  s.values = std::move(values);
  return s;
}

std::vector<std::vector<Index>> GroupStructure::group_indices() const {
  std::vector<std::vector<Index>> idx(static_cast<std::size_t>(G()));
  for (Index j = 0; j < assignments.size(); ++j)
    idx[static_cast<std::size_t>(assignments[j] - 1)].push_back(j);
  return idx;
}

GroupStructure to_group_structure(const CoDataSource& source) {
  const int G = source.group_count();
  GroupStructure gs;
  gs.assignments = source.assignments;
  gs.sizes = VectorXi::Zero(G);
  for (Index j = 0; j < gs.assignments.size(); ++j)
    gs.sizes[gs.assignments[j] - 1]++;
  return gs;
}

GroupStructure group_structure_from_assignments(const VectorXi& assignments) {
  return to_group_structure(grouped_source(assignments));
}

GroupStructure equal_blocks(Index p, int G) {
  if (G < 1) throw data_error("equal_blocks: G must be >= 1");
  if (p % G != 0)
    throw data_error("equal_blocks: G = " + std::to_string(G) +
                     " does not divide p = " + std::to_string(p));
  const Index size = p / G;
  VectorXi assignments(p);
  for (Index j = 0; j < p; ++j)
    assignments[j] = static_cast<int>(j / size) + 1;
  return group_structure_from_assignments(assignments);
}

bool CoDataMatrix::pure_single_grouping() const {
  if (rows.empty() || rows.front().kind != RowInfo::Intercept) return false;
  int source = -1;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].kind != RowInfo::Indicator) return false;
    if (source == -1) source = rows[r].source;
    if (rows[r].source != source) return false;
  }
  return true;
}

GroupStructure CoDataMatrix::grouping() const {
  if (!pure_single_grouping())
    throw data_error("co-data matrix is not a single grouping");
  VectorXi assignments = VectorXi::Ones(p());
  for (Index r = 1; r < C(); ++r)
    for (Index j = 0; j < p(); ++j)
      if (Z(r, j) != 0.0) assignments[j] = static_cast<int>(r) + 1;
  return group_structure_from_assignments(assignments);
}

CoDataMatrix CoDataMatrix::intercept_only(Index p) {
  CoDataMatrix m;
  m.Z = MatrixXd::Ones(1, p);
  m.row_labels = {"intercept"};
  m.rows = {{RowInfo::Intercept, -1, -1}};
  return m;
}

CoDataMatrix encode_codata(const std::vector<CoDataSource>& sources, Index p,
                           bool standardize) {
  if (sources.empty()) throw data_error("encode_codata: no co-data sources");
  for (const auto& s : sources) {
    s.validate();
    if (s.size() != p)
      throw data_error("encode_codata: source '" + s.label + "' has length " +
                       std::to_string(s.size()) + ", expected p = " +
                       std::to_string(p));
  }

  Index C = 1;
  for (const auto& s : sources)
    C += s.kind == CoDataKind::Grouped ? s.group_count() - 1 : 1;

  CoDataMatrix m;
  m.Z.resize(C, p);
  m.Z.row(0).setOnes();
  m.row_labels = {"intercept"};
  m.rows = {{CoDataMatrix::RowInfo::Intercept, -1, -1}};

  Index r = 1;
  for (std::size_t si = 0; si < sources.size(); ++si) {
    const auto& s = sources[si];
    if (s.kind == CoDataKind::Grouped) {
      const int G = s.group_count();
      for (int g = 2; g <= G; ++g, ++r) {
        for (Index j = 0; j < p; ++j)
          m.Z(r, j) = s.assignments[j] == g ? 1.0 : 0.0;
        m.row_labels.push_back(s.label + ":group" + std::to_string(g));
        m.rows.push_back({CoDataMatrix::RowInfo::Indicator,
                          static_cast<int>(si), g});
      }
    } else {
      VectorXd row = s.values;
      if (standardize) {
        const double mean = row.mean();
        row.array() -= mean;
        const double sd =
            p > 1 ? std::sqrt(row.squaredNorm() / static_cast<double>(p - 1))
                  : 0.0;
        if (sd <= 0.0)
          throw data_error("encode_codata: continuous source '" + s.label +
                           "' is constant; cannot standardize");
        row /= sd;
      }
      m.Z.row(r) = row.transpose();
      m.row_labels.push_back(s.label);
      m.rows.push_back({CoDataMatrix::RowInfo::Continuous,
                        static_cast<int>(si), -1});
      ++r;
    }
  }

  if (C == 1) m.warnings.push_back(CoDataWarning::InterceptOnly);
  return m;
}

}  // namespace codashrink
