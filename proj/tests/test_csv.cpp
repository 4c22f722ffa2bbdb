#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "codashrink/csv.hpp"

using namespace codashrink;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() /
                   ("codashrink_csv_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE_BEGIN("csv");

TEST_CASE("matrix round trip is exact") {
  TempDir tmp;
  MatrixXd m(3, 2);
  m << 1.0 / 3.0, -2.5e-17, 1e300, 0.1, -0.0, 42.0;
  write_matrix_csv(tmp.path / "m.csv", m);
  const MatrixXd back = read_matrix_csv(tmp.path / "m.csv");
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 2);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 2; ++j) CHECK(back(i, j) == m(i, j));
}

TEST_CASE("malformed cells report the line number") {
  TempDir tmp;
  std::ofstream(tmp.path / "bad.csv") << "1,2\n3,oops\n";
  try {
    read_matrix_csv(tmp.path / "bad.csv");
    FAIL("expected data_error");
  } catch (const data_error& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("ragged rows are rejected") {
  TempDir tmp;
  std::ofstream(tmp.path / "ragged.csv") << "1,2\n3\n";
  CHECK_THROWS_AS(read_matrix_csv(tmp.path / "ragged.csv"), data_error);
}

TEST_CASE("co-data files round trip") {
  TempDir tmp;
  VectorXi a(4);
  a << 1, 2, 2, 1;
  write_codata_csv(tmp.path / "g.csv", grouped_source(a, "chrom"));
  auto g = read_codata_csv(tmp.path / "g.csv");
  CHECK(g.kind == CoDataKind::Grouped);
  CHECK(g.label == "chrom");
  CHECK(g.assignments == a);

  VectorXd v(3);
  v << -1.5, 0.25, 9.75;
  write_codata_csv(tmp.path / "c.csv", continuous_source(v, "logp"));
  auto c = read_codata_csv(tmp.path / "c.csv");
  CHECK(c.kind == CoDataKind::Continuous);
  CHECK(c.values == v);

  std::ofstream(tmp.path / "unk.csv") << "foo,mystery\n1\n";
  CHECK_THROWS_AS(read_codata_csv(tmp.path / "unk.csv"), data_error);
}

TEST_CASE("format_double survives a parse round trip") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -7.25, 3.141592653589793}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_SUITE_END();
