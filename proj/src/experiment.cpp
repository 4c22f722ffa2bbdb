#include "codashrink/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <tuple>

#include "codashrink/csv.hpp"
#include "codashrink/evalmetrics.hpp"
#include "codashrink/penalty_transfer.hpp"
#include "codashrink/sgl.hpp"
#include "codashrink/simgen.hpp"
#include "codashrink/spike_slab_vb.hpp"
#include "codashrink/svg.hpp"
#include "codashrink/weighted_lasso.hpp"

namespace codashrink {

using nlohmann::json;

namespace {

std::uint64_t fnv64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

double quantile(std::vector<double> sorted, double frac) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = frac * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

double median_of(const VectorXd& v, const std::vector<Index>& idx) {
  std::vector<double> vals;
  vals.reserve(idx.size());
  for (Index j : idx) vals.push_back(v[j]);
  std::sort(vals.begin(), vals.end());
  return quantile(std::move(vals), 0.5);
}

}  // namespace

std::uint64_t repeat_seed(std::uint64_t base_seed, const std::string& scenario,
                          int G, int repeat) {
  return base_seed ^ fnv64(scenario + "/" + std::to_string(G) + "/" +
                           std::to_string(repeat));
}

ExperimentConfig ExperimentConfig::fig3_paper() {
  ExperimentConfig c;
  c.experiment = "fig3";
  c.G_list = {3, 6, 9, 15, 24, 39, 60, 99};
  c.p_sel_list = {25, 50};
  c.repeats = 25;
  return c;
}

ExperimentConfig ExperimentConfig::fig3_desk() {
  ExperimentConfig c = fig3_paper();
  c.G_list = {3, 6, 99};
  c.p_sel_list = {50};
  c.repeats = 10;
  return c;
}

ExperimentConfig ExperimentConfig::supplement_paper() {
  ExperimentConfig c;
  c.experiment = "supplement";
  c.null_G_list = {6, 15, 39, 60};
  c.informative_G_list = {6, 15, 39, 60};
  c.p_sel_list = {25, 50};
  c.repeats = 25;
  return c;
}

ExperimentConfig ExperimentConfig::supplement_desk() {
  ExperimentConfig c = supplement_paper();
  c.null_G_list = {60};
  c.informative_G_list = {6, 15};
  c.p_sel_list = {50};
  c.repeats = 10;
  return c;
}

ExperimentConfig ExperimentConfig::roc_paper() {
  ExperimentConfig c;
  c.experiment = "roc";
  c.snp_seeds = 3;
  return c;
}

ExperimentConfig ExperimentConfig::roc_desk() { return roc_paper(); }

void ExperimentConfig::apply_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw data_error("config " + path.string() + ": " + e.what());
  }
  if (j.contains("experiment")) experiment = j["experiment"].get<std::string>();
  if (j.contains("n")) n = j["n"].get<Index>();
  if (j.contains("p")) p = j["p"].get<Index>();
  if (j.contains("G")) G_list = j["G"].get<std::vector<int>>();
  if (j.contains("p_sel")) p_sel_list = j["p_sel"].get<std::vector<Index>>();
  if (j.contains("repeats")) repeats = j["repeats"].get<int>();
  if (j.contains("q_bar")) q_bar = j["q_bar"].get<double>();
  if (j.contains("tau2")) tau2 = j["tau2"].get<double>();
  if (j.contains("alpha_mix")) alpha_mix = j["alpha_mix"].get<double>();
  if (j.contains("base_seed")) base_seed = j["base_seed"].get<std::uint64_t>();
  if (j.contains("output_dir")) output_dir = j["output_dir"].get<std::string>();
  if (j.contains("null_G")) null_G_list = j["null_G"].get<std::vector<int>>();
  if (j.contains("informative_G"))
    informative_G_list = j["informative_G"].get<std::vector<int>>();
  if (j.contains("shrink")) {
    const auto& s = j["shrink"];
    if (s.contains("enabled")) shrink.enabled = s["enabled"].get<bool>();
    if (s.contains("scale")) shrink.scale = s["scale"].get<double>();
    if (s.contains("smooth_c")) shrink.smooth_c = s["smooth_c"].get<double>();
    if (s.contains("target_log_lambda"))
      shrink.target_log_lambda = s["target_log_lambda"].get<double>();
  }
  if (j.contains("snp")) {
    const auto& s = j["snp"];
    if (s.contains("n")) snp_n = s["n"].get<Index>();
    if (s.contains("p")) snp_p = s["p"].get<Index>();
    if (s.contains("seeds")) snp_seeds = s["seeds"].get<int>();
    if (s.contains("noise_sd")) snp_noise_sd = s["noise_sd"].get<double>();
  }
}

std::string ExperimentConfig::to_json_string() const {
  json j;
  j["experiment"] = experiment;
  j["n"] = n;
  j["p"] = p;
  j["G"] = G_list;
  j["p_sel"] = p_sel_list;
  j["repeats"] = repeats;
  j["q_bar"] = q_bar;
  j["tau2"] = tau2;
  j["alpha_mix"] = alpha_mix;
  j["base_seed"] = base_seed;
  // output_dir is deliberately not echoed: reruns into different
  // directories must produce byte-identical manifests
  j["null_G"] = null_G_list;
  j["informative_G"] = informative_G_list;
  j["shrink"] = {{"enabled", shrink.enabled},
                 {"scale", shrink.scale},
                 {"smooth_c", shrink.smooth_c}};
  if (!std::isnan(shrink.target_log_lambda))
    j["shrink"]["target_log_lambda"] = shrink.target_log_lambda;
  j["snp"] = {{"n", snp_n},
              {"p", snp_p},
              {"seeds", snp_seeds},
              {"noise_sd", snp_noise_sd}};
  return j.dump(2);
}

void ExperimentReport::aggregate() {
  std::map<std::tuple<std::string, std::string, int, Index, std::string>,
           std::vector<double>>
      cells;
  failures = 0;
  for (const auto& r : rows) {
    if (r.failed) {
      ++failures;
      continue;
    }
    cells[{r.scenario, r.method, r.G, r.p_sel, r.metric}].push_back(r.value);
  }
  aggregates.clear();
  for (auto& [key, vals] : cells) {
    AggregateRow a;
    std::tie(a.scenario, a.method, a.G, a.p_sel, a.metric) = key;
    a.count = static_cast<int>(vals.size());
    const double mean =
        std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    a.mean = mean;
    a.sd = vals.size() > 1 ? std::sqrt(ss / (vals.size() - 1)) : 0.0;
    std::sort(vals.begin(), vals.end());
    a.q25 = quantile(vals, 0.25);
    a.median = quantile(vals, 0.5);
    a.q75 = quantile(vals, 0.75);
    aggregates.push_back(std::move(a));
  }
}

void ExperimentReport::write_report_csv(
    const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  out << "scenario,G,method,p_sel,repeat,seed,metric,value,failed,error\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.G << ',' << r.method << ',' << r.p_sel << ','
        << r.repeat << ',' << r.seed << ',' << r.metric << ','
        << format_double(r.value) << ',' << (r.failed ? 1 : 0) << ','
        << r.error << '\n';
  }
}

void ExperimentReport::write_aggregate_csv(
    const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  out << "scenario,G,method,p_sel,metric,count,mean,sd,q25,median,q75\n";
  for (const auto& a : aggregates) {
    out << a.scenario << ',' << a.G << ',' << a.method << ',' << a.p_sel << ','
        << a.metric << ',' << a.count << ',' << format_double(a.mean) << ','
        << format_double(a.sd) << ',' << format_double(a.q25) << ','
        << format_double(a.median) << ',' << format_double(a.q75) << '\n';
  }
}

double ExperimentReport::mean_value(const std::string& scenario,
                                    const std::string& method, int G,
                                    Index p_sel,
                                    const std::string& metric) const {
  double sum = 0.0;
  int count = 0;
  for (const auto& r : rows) {
    if (r.failed) continue;
    if (!scenario.empty() && r.scenario != scenario) continue;
    if (!method.empty() && r.method != method) continue;
    if (G != 0 && r.G != G) continue;
    if (p_sel != 0 && r.p_sel != p_sel) continue;
    if (!metric.empty() && r.metric != metric) continue;
    sum += r.value;
    ++count;
  }
  return count ? sum / count
               : std::numeric_limits<double>::quiet_NaN();
}

namespace {

struct TaskResult {
  std::vector<MetricRow> rows;
};

MetricRow base_row(const std::string& scenario, int G, int repeat,
                   std::uint64_t seed) {
  MetricRow r;
  r.scenario = scenario;
  r.G = G;
  r.repeat = repeat;
  r.seed = seed;
  return r;
}

void push_f1_rows(TaskResult& out, MetricRow proto, const std::string& method,
                  const CoefPath& cp, const std::vector<Index>& truth,
                  Index p, const std::vector<Index>& p_sel_list) {
  proto.method = method;
  proto.metric = "f1";
  for (Index p_sel : p_sel_list) {
    MetricRow r = proto;
    r.p_sel = p_sel;
    try {
      const auto selected = select_to_size(cp, p_sel);
      r.value = f1_at(selected, truth, p).f1;
    } catch (const std::exception& e) {
      r.failed = true;
      r.error = e.what();
      r.value = std::numeric_limits<double>::quiet_NaN();
    }
    out.rows.push_back(std::move(r));
  }
}

void fail_all(TaskResult& out, MetricRow proto,
              const std::vector<std::string>& methods,
              const std::vector<Index>& p_sel_list, const std::string& what) {
  for (const auto& m : methods) {
    for (Index p_sel : p_sel_list) {
      MetricRow r = proto;
      r.method = m;
      r.metric = "f1";
      r.p_sel = p_sel;
      r.failed = true;
      r.error = what;
      r.value = std::numeric_limits<double>::quiet_NaN();
      out.rows.push_back(std::move(r));
    }
  }
}

Index max_p_sel(const std::vector<Index>& p_sel_list) {
  Index m = 0;
  for (Index v : p_sel_list) m = std::max(m, v);
  return m;
}

}  // namespace

ExperimentReport run_fig3(const ExperimentConfig& cfg) {
  if (cfg.G_list.empty() || cfg.p_sel_list.empty() || cfg.repeats < 1)
    throw data_error("run_fig3: G list, p_sel list and repeats required");

  struct Task {
    int G, repeat;
  };
  std::vector<Task> tasks;
  for (int G : cfg.G_list)
    for (int rep = 0; rep < cfg.repeats; ++rep) tasks.push_back({G, rep});
  std::vector<TaskResult> results(tasks.size());

  const Index want = max_p_sel(cfg.p_sel_list);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    const auto [G, rep] = tasks[ti];
    const std::uint64_t seed = repeat_seed(cfg.base_seed, "main", G, rep);
    MetricRow proto = base_row("main", G, rep, seed);
    TaskResult& out = results[ti];
    try {
      const Index p_used = largest_divisible(cfg.p, G);
      const SimInstance inst = gen_main(cfg.n, p_used, G, seed);
      const auto truth = inst.true_support();

      {
        PenaltyFit pf = fit_codata_alpha(
            inst.d,
            encode_codata({grouped_source(inst.groups.assignments)}, p_used,
                          false));
        WeightedLassoProblem prob{inst.d.X, inst.d.y,
                                  ridge_to_lasso_rates(pf.v), false};
        const CoefPath cp = path_until_entered(prob, want);
        push_f1_rows(out, proto, "gal", cp, truth, p_used, cfg.p_sel_list);
      }
      {
        SGLProblem prob{inst.d.X, inst.d.y, inst.groups, 0.0, cfg.alpha_mix,
                        VectorXd()};
        const CoefPath cp = sgl_path_until_entered(prob, want);
        push_f1_rows(out, proto, "sgl", cp, truth, p_used, cfg.p_sel_list);
      }
    } catch (const std::exception& e) {
      out.rows.clear();
      fail_all(out, proto, {"gal", "sgl"}, cfg.p_sel_list, e.what());
    }
  }

  ExperimentReport report;
  for (auto& r : results)
    report.rows.insert(report.rows.end(), r.rows.begin(), r.rows.end());
  report.aggregate();
  return report;
}

ExperimentReport run_supplement(const ExperimentConfig& cfg) {
  if ((cfg.null_G_list.empty() && cfg.informative_G_list.empty()) ||
      cfg.p_sel_list.empty() || cfg.repeats < 1)
    throw data_error("run_supplement: G lists, p_sel list and repeats required");

  struct Task {
    bool null_scenario;
    int G, repeat;
  };
  std::vector<Task> tasks;
  for (int G : cfg.null_G_list)
    for (int rep = 0; rep < cfg.repeats; ++rep) tasks.push_back({true, G, rep});
  for (int G : cfg.informative_G_list)
    for (int rep = 0; rep < cfg.repeats; ++rep)
      tasks.push_back({false, G, rep});
  std::vector<TaskResult> results(tasks.size());

  const Index want = max_p_sel(cfg.p_sel_list);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    const auto [null_scenario, G, rep] = tasks[ti];
    const std::string scen = null_scenario ? "null-groups" : "informative";
    const std::uint64_t seed = repeat_seed(cfg.base_seed, scen, G, rep);
    MetricRow proto = base_row(scen, G, rep, seed);
    TaskResult& out = results[ti];
    try {
      const Index p_used = largest_divisible(cfg.p, G);
      const SimInstance inst = null_scenario
                                   ? gen_null_groups(cfg.n, p_used, G, seed)
                                   : gen_main(cfg.n, p_used, G, seed);
      const auto truth = inst.true_support();
      const CoDataMatrix Z = encode_codata(
          {grouped_source(inst.groups.assignments)}, p_used, false);

      {
        WeightedLassoProblem prob{inst.d.X, inst.d.y,
                                  VectorXd::Ones(p_used), false};
        const CoefPath cp = path_until_entered(prob, want);
        push_f1_rows(out, proto, "lasso", cp, truth, p_used, cfg.p_sel_list);
      }
      {
        PenaltyFit pf = fit_codata_alpha(inst.d, Z);
        WeightedLassoProblem prob{inst.d.X, inst.d.y,
                                  ridge_to_lasso_rates(pf.v), false};
        const CoefPath cp = path_until_entered(prob, want);
        push_f1_rows(out, proto, "gal", cp, truth, p_used, cfg.p_sel_list);
      }
      {
        ShrinkConfig shrink = cfg.shrink;
        shrink.enabled = true;
        PenaltyFit pf = fit_codata_alpha(inst.d, Z, shrink);
        WeightedLassoProblem prob{inst.d.X, inst.d.y,
                                  ridge_to_lasso_rates(pf.v), false};
        const CoefPath cp = path_until_entered(prob, want);
        push_f1_rows(out, proto, "gal-targeted", cp, truth, p_used,
                     cfg.p_sel_list);
      }
    } catch (const std::exception& e) {
      out.rows.clear();
      fail_all(out, proto, {"lasso", "gal", "gal-targeted"}, cfg.p_sel_list,
               e.what());
    }
  }

  ExperimentReport report;
  for (auto& r : results)
    report.rows.insert(report.rows.end(), r.rows.begin(), r.rows.end());
  report.aggregate();
  return report;
}

namespace {

struct RocCurves {
  std::vector<std::pair<std::string, ROCCurve>> curves;  // first seed only
};

}  // namespace

ExperimentReport run_roc_impl(const ExperimentConfig& cfg, RocCurves* keep) {
  if (cfg.snp_seeds < 1) throw data_error("run_roc: need at least one seed");

  std::vector<TaskResult> results(static_cast<std::size_t>(cfg.snp_seeds));
  std::vector<RocCurves> curves(static_cast<std::size_t>(cfg.snp_seeds));

#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < cfg.snp_seeds; ++rep) {
    const std::uint64_t seed = repeat_seed(cfg.base_seed, "snp", 0, rep);
    MetricRow proto = base_row("snp", 0, rep, seed);
    TaskResult& out = results[static_cast<std::size_t>(rep)];
    try {
      const SimInstance inst =
          gen_snp(cfg.snp_n, cfg.snp_p, seed, cfg.snp_noise_sd);
      const auto truth = inst.true_support();
      const Dataset centered = inst.d.centered();

      auto auc_row = [&](const std::string& method, const VectorXd& scores) {
        const ROCCurve curve = roc(scores, truth);
        MetricRow r = proto;
        r.method = method;
        r.metric = "auc";
        r.value = curve.auc;
        out.rows.push_back(r);
        if (rep == 0)
          curves[0].curves.emplace_back(method, curve);
        return curve;
      };

      {
        SSPrior prior{VectorXd::Constant(cfg.snp_p, cfg.q_bar), cfg.tau2};
        const VBPosterior post =
            vb_fit(centered, prior, Sigma2Mode::Estimate);
        auc_row("ssvb-none", post.incl);
      }

      const std::vector<std::pair<std::string, std::vector<CoDataSource>>>
          configs = {{"ssvb-z1", {inst.codata[0]}},
                     {"ssvb-z2", {inst.codata[1]}},
                     {"ssvb-both", {inst.codata[0], inst.codata[1]}}};
      for (const auto& [method, sources] : configs) {
        const GuidedSSResult res = guided_ss_pipeline(
            inst.d, sources, cfg.q_bar, cfg.tau2, Sigma2Mode::Estimate);
        auc_row(method, res.posterior.incl);
        if (method == "ssvb-both") {
          std::vector<Index> nulls;
          for (Index j = 0; j < cfg.snp_p; ++j)
            if (inst.beta_true[j] == 0.0) nulls.push_back(j);
          const double med_sig = median_of(res.probs.q, truth);
          const double med_null = median_of(res.probs.q, nulls);
          for (const auto& [metric, value] :
               std::initializer_list<std::pair<const char*, double>>{
                   {"q_median_signal", med_sig},
                   {"q_median_null", med_null},
                   {"q_ratio", med_null > 0.0 ? med_sig / med_null
                                              : std::numeric_limits<
                                                    double>::infinity()}}) {
            MetricRow r = proto;
            r.method = method;
            r.metric = metric;
            r.value = value;
            out.rows.push_back(r);
          }
        }
      }
    } catch (const std::exception& e) {
      out.rows.clear();
      MetricRow r = proto;
      r.metric = "auc";
      r.failed = true;
      r.error = e.what();
      r.value = std::numeric_limits<double>::quiet_NaN();
      for (const auto& m : {"ssvb-none", "ssvb-z1", "ssvb-z2", "ssvb-both"}) {
        r.method = m;
        out.rows.push_back(r);
      }
    }
  }

  if (keep) *keep = std::move(curves[0]);

  ExperimentReport report;
  for (auto& r : results)
    report.rows.insert(report.rows.end(), r.rows.begin(), r.rows.end());
  report.aggregate();
  return report;
}

ExperimentReport run_roc(const ExperimentConfig& cfg) {
  return run_roc_impl(cfg, nullptr);
}

namespace {

void write_f1_svg(const ExperimentReport& report, const ExperimentConfig& cfg,
                  const std::string& scenario,
                  const std::vector<int>& G_list,
                  const std::vector<std::string>& methods,
                  const std::filesystem::path& path, const std::string& title) {
  static const std::map<std::string, std::string> palette = {
      {"gal", "#2ca02c"},
      {"sgl", "#1f77b4"},
      {"gal-targeted", "#14621c"},
      {"lasso", "#ff7f0e"}};
  SvgPlot plot;
  plot.title = title;
  plot.x_label = "number of groups G";
  plot.y_label = "F1";
  plot.x_log = true;
  for (Index p_sel : cfg.p_sel_list) {
    for (const auto& m : methods) {
      SvgSeries cloud;
      cloud.color = palette.count(m) ? palette.at(m) : "#555";
      cloud.draw_line = false;
      cloud.point_radius = 1.5;
      for (const auto& r : report.rows)
        if (!r.failed && r.scenario == scenario && r.method == m &&
            r.p_sel == p_sel && r.metric == "f1")
          cloud.points.emplace_back(r.G, r.value);
      SvgSeries means;
      means.label = m + " (p_sel=" + std::to_string(p_sel) + ")";
      means.color = cloud.color;
      means.point_radius = 3.0;
      for (int G : G_list) {
        const double mean = report.mean_value(scenario, m, G, p_sel, "f1");
        if (!std::isnan(mean)) means.points.emplace_back(G, mean);
      }
      plot.series.push_back(std::move(cloud));
      plot.series.push_back(std::move(means));
    }
  }
  plot.write(path);
}

}  // namespace

ExperimentReport run_and_write(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);

  ExperimentReport report;
  if (cfg.experiment == "fig3") {
    report = run_fig3(cfg);
    write_f1_svg(report, cfg, "main", cfg.G_list, {"gal", "sgl"},
                 dir / "fig3.svg",
                 "F1 at fixed model size: group-adaptive lasso vs sparse "
                 "group-lasso");
  } else if (cfg.experiment == "supplement") {
    report = run_supplement(cfg);
    if (!cfg.null_G_list.empty())
      write_f1_svg(report, cfg, "null-groups", cfg.null_G_list,
                   {"lasso", "gal", "gal-targeted"},
                   dir / "supplement_null.svg",
                   "Non-informative groups: targeted shrinkage");
    if (!cfg.informative_G_list.empty())
      write_f1_svg(report, cfg, "informative", cfg.informative_G_list,
                   {"lasso", "gal", "gal-targeted"},
                   dir / "supplement_informative.svg",
                   "Informative groups: targeted shrinkage");
  } else if (cfg.experiment == "roc") {
    RocCurves curves;
    report = run_roc_impl(cfg, &curves);
    static const std::map<std::string, std::string> palette = {
        {"ssvb-none", "#444444"},
        {"ssvb-z1", "#1f77b4"},
        {"ssvb-z2", "#9467bd"},
        {"ssvb-both", "#d62728"}};
    SvgPlot plot;
    plot.title = "Spike-and-slab feature selection ROC (seed 0)";
    plot.x_label = "1 - specificity";
    plot.y_label = "sensitivity";
    std::ofstream pts(dir / "roc_points.csv");
    pts << "method,fpr,tpr\n";
    for (const auto& [method, curve] : curves.curves) {
      SvgSeries s;
      s.label = method;
      s.color = palette.count(method) ? palette.at(method) : "#555";
      s.draw_points = false;
      for (auto [x, y] : curve.points) {
        s.points.emplace_back(x, y);
        pts << method << ',' << format_double(x) << ',' << format_double(y)
            << '\n';
      }
      plot.series.push_back(std::move(s));
    }
    plot.write(dir / "roc.svg");
  } else {
    throw data_error("unknown experiment '" + cfg.experiment + "'");
  }

  report.write_report_csv(dir / "report.csv");
  report.write_aggregate_csv(dir / "aggregate.csv");

  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = json::parse(cfg.to_json_string());
  manifest["failures"] = report.failures;
  std::vector<std::uint64_t> seeds;
  for (const auto& r : report.rows) seeds.push_back(r.seed);
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  manifest["seeds"] = seeds;
  std::ofstream mf(dir / "manifest.json");
  mf << manifest.dump(2) << '\n';

  return report;
}

}  // namespace codashrink
