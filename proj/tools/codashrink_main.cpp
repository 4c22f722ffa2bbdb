// codashrink command line: simulate data, fit the models, evaluate
// selections, and reproduce the bundled experiments.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <omp.h>

#include "codashrink/csv.hpp"
#include "codashrink/evalmetrics.hpp"
#include "codashrink/experiment.hpp"
#include "codashrink/penalty_transfer.hpp"
#include "codashrink/sgl.hpp"
#include "codashrink/simgen.hpp"
#include "codashrink/spike_slab_vb.hpp"
#include "codashrink/weighted_lasso.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace codashrink;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

std::uint64_t file_checksum(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<CoDataSource> load_codata_list(const std::string& spec) {
  std::vector<CoDataSource> sources;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const std::string path = spec.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!path.empty()) sources.push_back(read_codata_csv(path));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (sources.empty()) throw data_error("no co-data files given");
  return sources;
}

void write_selection(const fs::path& dir, const std::vector<Index>& selected,
                     const VectorXd& beta) {
  fs::create_directories(dir);
  std::ofstream sel(dir / "selected.csv");
  for (Index j : selected) sel << j + 1 << '\n';  // 1-based feature ids
  write_vector_csv(dir / "beta.csv", beta);
}

json penalty_fit_json(const PenaltyFit& fit) {
  std::vector<double> alpha(fit.alpha.data(),
                            fit.alpha.data() + fit.alpha.size());
  std::vector<double> vs(fit.v.data(), fit.v.data() + fit.v.size());
  std::sort(vs.begin(), vs.end());
  auto q = [&vs](double f) {
    const double pos = f * static_cast<double>(vs.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, vs.size() - 1);
    return (1.0 - (pos - lo)) * vs[lo] + (pos - lo) * vs[hi];
  };
  json j;
  j["alpha"] = alpha;
  j["v_summary"] = {{"min", vs.front()}, {"q25", q(0.25)},
                    {"median", q(0.5)},  {"q75", q(0.75)},
                    {"max", vs.back()},  {"p", vs.size()}};
  j["sigma2"] = fit.sigma2;
  j["logml"] = fit.logml;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["at_bound"] = fit.at_bound;
  if (!std::isnan(fit.shrink_target)) j["shrink_target"] = fit.shrink_target;
  return j;
}

struct SimulateArgs {
  std::string scenario = "main", out = "sim";
  std::uint64_t seed = 1;
  Index n = 200, p = 1998;
  int G = 3, n_signal_groups = 5;
  double noise_sd = 0.0;
};

int cmd_simulate(const SimulateArgs& a) {
  const Scenario sc = scenario_from_name(a.scenario);
  SimInstance inst;
  switch (sc) {
    case Scenario::Main: inst = gen_main(a.n, a.p, a.G, a.seed); break;
    case Scenario::GroupSparse:
      inst = gen_group_sparse(a.n, a.p, a.G, a.n_signal_groups, a.seed);
      break;
    case Scenario::NullGroups:
      inst = gen_null_groups(a.n, a.p, a.G, a.seed);
      break;
    case Scenario::SNP: inst = gen_snp(a.n, a.p, a.seed, a.noise_sd); break;
  }
  fs::create_directories(a.out);
  const fs::path dir(a.out);
  write_matrix_csv(dir / "X.csv", inst.d.X);
  write_vector_csv(dir / "y.csv", inst.d.y);
  write_vector_csv(dir / "beta_true.csv", inst.beta_true);
  if (inst.groups.p() > 0)
    write_int_vector_csv(dir / "groups.csv", inst.groups.assignments);
  std::vector<std::string> codata_files;
  for (std::size_t i = 0; i < inst.codata.size(); ++i) {
    const std::string name = "codata_" + std::to_string(i + 1) + ".csv";
    write_codata_csv(dir / name, inst.codata[i]);
    codata_files.push_back(name);
  }
  json manifest;
  manifest["scenario"] = scenario_name(inst.scenario);
  manifest["n"] = inst.d.n();
  manifest["p"] = inst.d.p();
  if (sc != Scenario::SNP) manifest["G"] = inst.groups.G();
  if (sc == Scenario::GroupSparse)
    manifest["n_signal_groups"] = a.n_signal_groups;
  if (sc == Scenario::SNP) manifest["noise_sd"] = a.noise_sd;
  manifest["seed"] = inst.seed;
  manifest["codata_files"] = codata_files;
  manifest["warnings"] = inst.warnings;
  manifest["checksum_x"] = file_checksum(dir / "X.csv");
  manifest["checksum_y"] = file_checksum(dir / "y.csv");
  std::ofstream mf(dir / "manifest.json");
  mf << manifest.dump(2) << '\n';
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Guided adaptive shrinkage for high-dimensional regression"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs,-j", jobs, "OpenMP worker cap")
      ->envname("CODASHRINK_JOBS");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Generate a simulation instance");
  sim->add_option("--scenario", sa.scenario,
                  "main | group-sparse | null-groups | snp");
  sim->add_option("--n", sa.n, "samples");
  sim->add_option("--p", sa.p, "features");
  sim->add_option("--G", sa.G, "groups (blocked scenarios)");
  sim->add_option("--n-signal-groups", sa.n_signal_groups,
                  "signal groups (group-sparse)");
  sim->add_option("--noise-sd", sa.noise_sd, "response noise sd (snp)");
  sim->add_option("--seed", sa.seed, "seed");
  sim->add_option("--out", sa.out, "output directory")->required();

  std::string x_path, y_path, codata_spec, groups_path;
  std::string fit_out = "fit.json", v_out, path_out;
  std::string gal_out, sgl_out, vb_out, eval_out;
  bool shrink_flag = false, standardize = false, no_center = false;
  double shrink_target = std::numeric_limits<double>::quiet_NaN();
  Index p_sel = 50;
  double alpha_mix = 0.95, q_bar = 0.01, tau2 = 0.25, sigma2 = 0.0;

  auto* feb = app.add_subcommand(
      "fit-ridge-eb", "Empirical-Bayes ridge hyperparameters from co-data");
  feb->add_option("--x", x_path, "X csv (headerless, rows = samples)")
      ->required();
  feb->add_option("--y", y_path, "y csv (single column)")->required();
  feb->add_option("--codata", codata_spec,
                  "comma-separated co-data csv files (label,kind header)");
  feb->add_flag("--shrink", shrink_flag,
                "targeted shrinkage of group log-penalties");
  feb->add_option("--shrink-target", shrink_target,
                  "log lambda target (default: single-penalty fit)");
  feb->add_option("--out", fit_out, "fit summary json");
  feb->add_option("--v-out", v_out, "optional per-feature variance csv");

  auto* fgal = app.add_subcommand("fit-gal", "Group-adaptive lasso selection");
  fgal->add_option("--x", x_path, "X csv")->required();
  fgal->add_option("--y", y_path, "y csv")->required();
  fgal->add_option("--groups", groups_path, "group index per feature (1..G)")
      ->required();
  fgal->add_option("--psel", p_sel, "number of features to select")
      ->required();
  fgal->add_flag("--shrink", shrink_flag, "targeted hyperparameter shrinkage");
  fgal->add_flag("--standardize", standardize, "scale columns to unit sd");
  fgal->add_option("--out", gal_out, "output directory")->required();
  fgal->add_option("--path-out", path_out, "optional long-format path csv");

  auto* fsgl = app.add_subcommand("fit-sgl", "Sparse group-lasso selection");
  fsgl->add_option("--x", x_path, "X csv")->required();
  fsgl->add_option("--y", y_path, "y csv")->required();
  fsgl->add_option("--groups", groups_path, "group index per feature (1..G)")
      ->required();
  fsgl->add_option("--psel", p_sel, "number of features to select")
      ->required();
  fsgl->add_option("--alpha-mix", alpha_mix, "l1 vs group-norm mixing");
  fsgl->add_flag("--standardize", standardize, "scale columns to unit sd");
  fsgl->add_option("--out", sgl_out, "output directory")->required();

  auto* fvb = app.add_subcommand(
      "fit-ssvb",
      "Spike-and-slab variational Bayes, optionally co-data guided");
  fvb->add_option("--x", x_path, "X csv")->required();
  fvb->add_option("--y", y_path, "y csv")->required();
  fvb->add_option("--codata", codata_spec, "comma-separated co-data csv files");
  fvb->add_option("--qbar", q_bar, "mean prior inclusion probability");
  fvb->add_option("--tau2", tau2, "slab variance");
  fvb->add_option("--sigma2", sigma2,
                  "fixed noise variance (default: estimated)");
  fvb->add_flag("--no-center", no_center, "skip centering X and y");
  fvb->add_option("--out", vb_out, "output directory")->required();

  std::string selected_path, beta_true_path, scores_path;
  auto* ev =
      app.add_subcommand("eval", "Score a selection or ranking against truth");
  ev->add_option("--selected", selected_path, "selected 1-based indices csv");
  ev->add_option("--scores", scores_path, "per-feature scores csv");
  ev->add_option("--beta-true", beta_true_path, "true coefficient vector csv")
      ->required();
  ev->add_option("--out", eval_out, "optional output directory for roc points");

  std::string rep_target, rep_config, rep_out;
  bool desk = false;
  std::uint64_t rep_seed_val = 0;
  auto* rep = app.add_subcommand("reproduce", "Run a bundled experiment");
  rep->add_option("target", rep_target, "fig3 | supplement | roc")
      ->required()
      ->check(CLI::IsMember({"fig3", "supplement", "roc"}));
  rep->add_flag("--desk", desk, "reduced desk-scale configuration");
  auto* seed_opt = rep->add_option("--seed", rep_seed_val, "base seed");
  rep->add_option("--config", rep_config, "JSON config overriding the preset");
  rep->add_option("--out", rep_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (jobs > 0) omp_set_num_threads(jobs);

  if (sim->parsed()) return cmd_simulate(sa);

  if (feb->parsed()) {
    Dataset d{read_matrix_csv(x_path), read_vector_csv(y_path)};
    d.validate();
    PenaltyFit fit;
    if (codata_spec.empty()) {
      fit = fit_single_penalty(d);
    } else {
      const auto sources = load_codata_list(codata_spec);
      const CoDataMatrix Z = encode_codata(sources, d.p(), true);
      ShrinkConfig shrink;
      shrink.enabled = shrink_flag;
      shrink.target_log_lambda = shrink_target;
      fit = fit_codata_alpha(d, Z, shrink);
    }
    std::ofstream out(fit_out);
    if (!out) throw data_error("cannot write " + fit_out);
    out << penalty_fit_json(fit).dump(2) << '\n';
    if (!v_out.empty()) write_vector_csv(v_out, fit.v);
    if (!fit.converged)
      std::cerr << "warning: optimizer returned best iterate without meeting "
                   "the gradient tolerance\n";
    return kExitOk;
  }

  if (fgal->parsed() || fsgl->parsed()) {
    Dataset d{read_matrix_csv(x_path), read_vector_csv(y_path)};
    d.validate();
    VectorXd sds = VectorXd::Ones(d.p());
    if (standardize) {
      WeightedLassoProblem tmp{d.X, d.y, VectorXd::Ones(d.p()), false};
      auto [scaled, col_sds] = standardize_columns(tmp);
      d.X = std::move(scaled.X);
      sds = std::move(col_sds);
    }
    const GroupStructure groups =
        group_structure_from_assignments(read_int_vector_csv(groups_path));
    if (fgal->parsed()) {
      ShrinkConfig shrink;
      shrink.enabled = shrink_flag;
      const SelectionFit fit = group_adaptive_lasso(d, groups, p_sel, shrink);
      write_selection(gal_out, fit.selected,
                      (fit.beta.array() / sds.array()).matrix());
      std::ofstream pf(fs::path(gal_out) / "fit.json");
      pf << penalty_fit_json(fit.penalty_fit).dump(2) << '\n';
      if (!path_out.empty()) {
        std::ofstream po(path_out);
        po << "t,j,beta\n";
        for (Index k = 0; k < fit.path.t_grid.size(); ++k)
          for (Index j = 0; j < fit.path.betas.cols(); ++j)
            if (fit.path.betas(k, j) != 0.0)
              po << format_double(fit.path.t_grid[k]) << ',' << j + 1 << ','
                 << format_double(fit.path.betas(k, j)) << '\n';
      }
      return kExitOk;
    }
    const SelectionFit fit = sgl_path_select(d, groups, p_sel, alpha_mix);
    write_selection(sgl_out, fit.selected,
                    (fit.beta.array() / sds.array()).matrix());
    return kExitOk;
  }

  if (fvb->parsed()) {
    Dataset d{read_matrix_csv(x_path), read_vector_csv(y_path)};
    d.validate();
    const Sigma2Mode mode =
        sigma2 > 0.0 ? Sigma2Mode::Fixed : Sigma2Mode::Estimate;
    fs::create_directories(vb_out);
    const fs::path dir(vb_out);
    VBPosterior post;
    if (codata_spec.empty()) {
      const Dataset work = no_center ? d : d.centered();
      SSPrior prior{VectorXd::Constant(d.p(), q_bar), tau2};
      post = vb_fit(work, prior, mode, sigma2);
    } else {
      GuidedSSOptions opts;
      opts.center = !no_center;
      const auto sources = load_codata_list(codata_spec);
      GuidedSSResult res =
          guided_ss_pipeline(d, sources, q_bar, tau2, mode, sigma2, opts);
      write_vector_csv(dir / "qhat.csv", res.probs.q);
      std::ofstream pf(dir / "penalty_fit.json");
      pf << penalty_fit_json(res.penalty_fit).dump(2) << '\n';
      post = std::move(res.posterior);
    }
    std::ofstream pc(dir / "posterior.csv");
    pc << "j,incl,mu,s2\n";
    for (Index j = 0; j < post.incl.size(); ++j)
      pc << j + 1 << ',' << format_double(post.incl[j]) << ','
         << format_double(post.mu[j]) << ',' << format_double(post.s2[j])
         << '\n';
    std::ofstream ec(dir / "elbo.csv");
    for (double e : post.elbo_trace) ec << format_double(e) << '\n';
    return kExitOk;
  }

  if (ev->parsed()) {
    const VectorXd beta_true = read_vector_csv(beta_true_path);
    std::vector<Index> truth;
    for (Index j = 0; j < beta_true.size(); ++j)
      if (beta_true[j] != 0.0) truth.push_back(j);
    json result;
    if (!selected_path.empty()) {
      const VectorXi sel_1based = read_int_vector_csv(selected_path);
      std::vector<Index> selected;
      for (Index i = 0; i < sel_1based.size(); ++i)
        selected.push_back(static_cast<Index>(sel_1based[i]) - 1);
      const SelectionEval e = f1_at(selected, truth, beta_true.size());
      result = {{"tp", e.tp},
                {"fp", e.fp},
                {"fn", e.fn},
                {"tn", e.tn},
                {"precision", e.precision},
                {"recall", e.recall},
                {"f1", e.f1}};
    }
    if (!scores_path.empty()) {
      const VectorXd scores = read_vector_csv(scores_path);
      const ROCCurve curve = roc(scores, truth);
      result["auc"] = curve.auc;
      if (curve.degenerate) result["degenerate"] = true;
      if (!eval_out.empty()) {
        fs::create_directories(eval_out);
        std::ofstream pts(fs::path(eval_out) / "roc_points.csv");
        pts << "fpr,tpr\n";
        for (auto [x, y] : curve.points)
          pts << format_double(x) << ',' << format_double(y) << '\n';
      }
    }
    if (result.empty())
      throw data_error("eval: pass --selected and/or --scores");
    std::cout << result.dump(2) << '\n';
    return kExitOk;
  }

  if (rep->parsed()) {
    ExperimentConfig cfg;
    if (rep_target == "fig3")
      cfg = desk ? ExperimentConfig::fig3_desk()
                 : ExperimentConfig::fig3_paper();
    else if (rep_target == "supplement")
      cfg = desk ? ExperimentConfig::supplement_desk()
                 : ExperimentConfig::supplement_paper();
    else
      cfg = desk ? ExperimentConfig::roc_desk() : ExperimentConfig::roc_paper();
    if (!rep_config.empty()) cfg.apply_json_file(rep_config);
    if (seed_opt->count()) cfg.base_seed = rep_seed_val;
    if (!rep_out.empty()) cfg.output_dir = rep_out;
    const ExperimentReport report = run_and_write(cfg);
    std::cout << "wrote " << cfg.output_dir << " (" << report.rows.size()
              << " rows, " << report.failures << " failures)\n";
    return report.failures == 0 ? kExitOk : kExitNumeric;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
