#include "codashrink/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace codashrink {

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  return in;
}

double parse_cell(const std::string& cell, const std::filesystem::path& path,
                  std::size_t line_no) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r'))
    --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw data_error(path.string() + ":" + std::to_string(line_no) +
                     ": malformed numeric cell '" + cell + "'");
  return value;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool blank(const std::string& line) {
  for (char c : line)
    if (c != ' ' && c != '\t' && c != '\r') return false;
  return true;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  // round-trip exact: try increasing precision until the value parses back
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, value);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == value) return buf;
  }
  return buf;
}

MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split_line(line);
    if (width == 0) width = cells.size();
    if (cells.size() != width)
      throw data_error(path.string() + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(width) + " columns, got " +
                       std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      row[c] = parse_cell(cells[c], path, line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw data_error(path.string() + ": empty matrix");
  MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

VectorXd read_vector_csv(const std::filesystem::path& path) {
  const MatrixXd m = read_matrix_csv(path);
  if (m.cols() != 1)
    throw data_error(path.string() + ": expected a single column, got " +
                     std::to_string(m.cols()));
  return m.col(0);
}

VectorXi read_int_vector_csv(const std::filesystem::path& path) {
  const VectorXd v = read_vector_csv(path);
  VectorXi out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double r = std::round(v[i]);
    if (std::abs(v[i] - r) > 1e-9)
      throw data_error(path.string() + ":" + std::to_string(i + 1) +
                       ": expected an integer, got " + format_double(v[i]));
    out[i] = static_cast<int>(r);
  }
  return out;
}

CoDataSource read_codata_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::string header;
  if (!std::getline(in, header))
    throw data_error(path.string() + ": missing `label,kind` header");
  auto cells = split_line(header);
  if (cells.size() != 2)
    throw data_error(path.string() + ":1: header must be `label,kind`");
  const std::string label = cells[0];
  std::string kind = cells[1];
  while (!kind.empty() && (kind.back() == '\r' || kind.back() == ' '))
    kind.pop_back();

  std::vector<double> values;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    values.push_back(parse_cell(line, path, line_no));
  }
  if (values.empty()) throw data_error(path.string() + ": no feature values");

  if (kind == "grouped") {
    VectorXi assignments(static_cast<Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double r = std::round(values[i]);
      if (std::abs(values[i] - r) > 1e-9)
        throw data_error(path.string() + ": grouped co-data must be integer labels");
      assignments[static_cast<Index>(i)] = static_cast<int>(r);
    }
    auto s = grouped_source(std::move(assignments), label);
    s.validate();
    return s;
  }
  if (kind == "continuous") {
    VectorXd v(static_cast<Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
      v[static_cast<Index>(i)] = values[i];
    auto s = continuous_source(std::move(v), label);
    s.validate();
    return s;
  }
  throw data_error(path.string() + ": unknown co-data kind '" + kind +
                   "' (expected grouped or continuous)");
}

void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_vector_csv(const std::filesystem::path& path, const VectorXd& v) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  for (Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
}

void write_int_vector_csv(const std::filesystem::path& path, const VectorXi& v) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  for (Index i = 0; i < v.size(); ++i) out << v[i] << '\n';
}

void write_codata_csv(const std::filesystem::path& path, const CoDataSource& s) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  out << s.label << ','
      << (s.kind == CoDataKind::Grouped ? "grouped" : "continuous") << '\n';
  if (s.kind == CoDataKind::Grouped) {
    for (Index j = 0; j < s.assignments.size(); ++j)
      out << s.assignments[j] << '\n';
  } else {
    for (Index j = 0; j < s.values.size(); ++j)
      out << format_double(s.values[j]) << '\n';
  }
}

}  // namespace codashrink
