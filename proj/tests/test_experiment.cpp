#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "codashrink/experiment.hpp"

using namespace codashrink;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny_fig3() {
  ExperimentConfig cfg = ExperimentConfig::fig3_desk();
  cfg.n = 40;
  cfg.p = 60;
  cfg.G_list = {3};
  cfg.p_sel_list = {5};
  cfg.repeats = 2;
  cfg.base_seed = 7;
  return cfg;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("codashrink_exp_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE_BEGIN("experiment");

TEST_CASE("repeat seeds do not move when the design grows") {
  const auto s = repeat_seed(1, "main", 3, 0);
  CHECK(repeat_seed(1, "main", 3, 0) == s);
  CHECK(repeat_seed(1, "main", 3, 1) != s);
  CHECK(repeat_seed(1, "main", 6, 0) != s);
  CHECK(repeat_seed(2, "main", 3, 0) != s);
  CHECK(repeat_seed(1, "snp", 3, 0) != s);
}

TEST_CASE("fig3 report has the full factorial shape") {
  const auto report = run_fig3(tiny_fig3());
  // |G| x methods x |p_sel| x repeats
  CHECK(report.rows.size() == 1 * 2 * 1 * 2);
  CHECK(report.failures == 0);
  int gal = 0, sgl = 0;
  for (const auto& r : report.rows) {
    CHECK(r.metric == "f1");
    CHECK(r.value >= 0.0);
    CHECK(r.value <= 1.0);
    if (r.method == "gal") ++gal;
    if (r.method == "sgl") ++sgl;
  }
  CHECK(gal == 2);
  CHECK(sgl == 2);
}

TEST_CASE("rerunning a config is bit-identical on disk") {
  TempDir a("a"), b("b");
  ExperimentConfig cfg = tiny_fig3();
  cfg.output_dir = (a.path / "out").string();
  run_and_write(cfg);
  cfg.output_dir = (b.path / "out").string();
  run_and_write(cfg);
  const std::string ra = slurp(a.path / "out" / "report.csv");
  CHECK(!ra.empty());
  CHECK(ra == slurp(b.path / "out" / "report.csv"));
  CHECK(slurp(a.path / "out" / "aggregate.csv") ==
        slurp(b.path / "out" / "aggregate.csv"));
  CHECK(fs::exists(a.path / "out" / "fig3.svg"));
  CHECK(fs::exists(a.path / "out" / "manifest.json"));
}

TEST_CASE("supplement runs three methods on both scenarios") {
  ExperimentConfig cfg = ExperimentConfig::supplement_desk();
  cfg.n = 40;
  cfg.p = 60;
  cfg.null_G_list = {3};
  cfg.informative_G_list = {3};
  cfg.p_sel_list = {5};
  cfg.repeats = 1;
  const auto report = run_supplement(cfg);
  CHECK(report.rows.size() == 2 * 3 * 1 * 1);
  int null_rows = 0;
  for (const auto& r : report.rows) {
    CHECK((r.method == "lasso" || r.method == "gal" ||
           r.method == "gal-targeted"));
    if (r.scenario == "null-groups") ++null_rows;
  }
  CHECK(null_rows == 3);
}

TEST_CASE("aggregation summarizes per cell") {
  ExperimentReport report;
  for (int rep = 0; rep < 4; ++rep) {
    MetricRow r;
    r.scenario = "main";
    r.method = "gal";
    r.G = 3;
    r.p_sel = 5;
    r.repeat = rep;
    r.metric = "f1";
    r.value = 0.1 * (rep + 1);
    report.rows.push_back(r);
  }
  report.rows.back().failed = true;
  report.aggregate();
  REQUIRE(report.aggregates.size() == 1);
  const auto& a = report.aggregates[0];
  CHECK(a.count == 3);
  CHECK(a.mean == doctest::Approx(0.2));
  CHECK(a.median == doctest::Approx(0.2));
  CHECK(report.failures == 1);
  CHECK(report.mean_value("main", "gal", 3, 5, "f1") == doctest::Approx(0.2));
  CHECK(std::isnan(report.mean_value("main", "sgl", 3, 5, "f1")));
}

TEST_CASE("config json round trip") {
  TempDir tmp("cfg");
  ExperimentConfig cfg = ExperimentConfig::supplement_paper();
  cfg.base_seed = 123;
  cfg.shrink.smooth_c = 1e-6;
  std::ofstream(tmp.path / "cfg.json") << cfg.to_json_string();
  ExperimentConfig loaded = ExperimentConfig::supplement_desk();
  loaded.apply_json_file(tmp.path / "cfg.json");
  CHECK(loaded.base_seed == 123);
  CHECK(loaded.repeats == cfg.repeats);
  CHECK(loaded.shrink.smooth_c == 1e-6);
  CHECK(loaded.null_G_list == cfg.null_G_list);

  std::ofstream(tmp.path / "bad.json") << "{ not json";
  CHECK_THROWS_AS(loaded.apply_json_file(tmp.path / "bad.json"), data_error);
}

TEST_SUITE_END();
