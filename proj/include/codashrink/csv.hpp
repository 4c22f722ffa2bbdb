#pragma once

#include <filesystem>
#include <string>

#include "codashrink/codata.hpp"
#include "codashrink/types.hpp"

namespace codashrink {

// Headerless numeric CSV, rows = samples. Malformed cells report 1-based
// line numbers in the error message.
MatrixXd read_matrix_csv(const std::filesystem::path& path);

// Single-column numeric CSV.
VectorXd read_vector_csv(const std::filesystem::path& path);

// One value per line; values parsed as integers.
VectorXi read_int_vector_csv(const std::filesystem::path& path);

// Co-data file: header line `label,kind` with kind in {grouped, continuous},
// then one value per feature per line.
CoDataSource read_codata_csv(const std::filesystem::path& path);

void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m);
void write_vector_csv(const std::filesystem::path& path, const VectorXd& v);
void write_int_vector_csv(const std::filesystem::path& path, const VectorXi& v);
void write_codata_csv(const std::filesystem::path& path, const CoDataSource& s);

// Shortest round-trip-exact decimal representation; used everywhere floats
// are written so reruns are byte-identical.
std::string format_double(double value);

}  // namespace codashrink
