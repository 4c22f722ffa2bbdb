#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "codashrink/ridge_eb.hpp"
#include "codashrink/types.hpp"

namespace codashrink {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  std::string experiment;  // fig3 | supplement | roc
  Index n = 200;
  Index p = 2000;
  std::vector<int> G_list;
  std::vector<Index> p_sel_list;
  int repeats = 25;
  double q_bar = 0.01;
  double tau2 = 0.25;
  double alpha_mix = 0.95;
  ShrinkConfig shrink;  // targeted-GAL arm; target derived per instance
  std::uint64_t base_seed = 1;
  std::string output_dir = "out";

  // supplement
  std::vector<int> null_G_list;
  std::vector<int> informative_G_list;

  // roc / SNP
  Index snp_n = 500;
  Index snp_p = 10000;
  int snp_seeds = 3;
  double snp_noise_sd = 0.0;

  static ExperimentConfig fig3_paper();
  static ExperimentConfig fig3_desk();
  static ExperimentConfig supplement_paper();
  static ExperimentConfig supplement_desk();
  static ExperimentConfig roc_paper();
  static ExperimentConfig roc_desk();

  // Overrides fields present in the JSON file on top of *this.
  void apply_json_file(const std::filesystem::path& path);
  std::string to_json_string() const;
};

struct MetricRow {
  std::string scenario;
  std::string method;
  int G = 0;
  Index p_sel = 0;
  int repeat = 0;
  std::uint64_t seed = 0;
  std::string metric;  // f1 | auc | q_median_signal | ...
  double value = 0.0;
  bool failed = false;
  std::string error;
};

struct AggregateRow {
  std::string scenario, method, metric;
  int G = 0;
  Index p_sel = 0;
  int count = 0;
  double mean = 0, sd = 0, q25 = 0, median = 0, q75 = 0;
};

struct ExperimentReport {
  std::vector<MetricRow> rows;
  std::vector<AggregateRow> aggregates;
  int failures = 0;

  void aggregate();
  void write_report_csv(const std::filesystem::path& path) const;
  void write_aggregate_csv(const std::filesystem::path& path) const;

  // Mean over non-failed rows matching every given field ("" / 0 matches
  // all); NaN when nothing matches.
  double mean_value(const std::string& scenario, const std::string& method,
                    int G, Index p_sel, const std::string& metric) const;
};

// base_seed XOR hash(scenario, G, repeat): adding repeats or group sizes
// never changes the seeds of existing cells.
std::uint64_t repeat_seed(std::uint64_t base_seed,
                          const std::string& scenario, int G, int repeat);

// F1 of group-adaptive lasso vs sparse group-lasso over a G sweep.
ExperimentReport run_fig3(const ExperimentConfig& cfg);
// Lasso / plain GAL / targeted GAL on non-informative and informative groups.
ExperimentReport run_supplement(const ExperimentConfig& cfg);
// Spike-and-slab ROC for the four co-data configurations on the SNP design.
ExperimentReport run_roc(const ExperimentConfig& cfg);

// Runs the named experiment and writes report.csv, aggregate.csv, the
// figure SVG(s), and manifest.json under cfg.output_dir.
ExperimentReport run_and_write(const ExperimentConfig& cfg);

}  // namespace codashrink
