#include "codashrink/simgen.hpp"

#include <algorithm>
#include <cmath>

#include "codashrink/rng.hpp"

// Stream layout:
//   "x", j       feature column j
//   "maf"        SNP minor allele frequencies
//   "pi"         signal-group nonzero proportions
//   "coef"       nonzero coefficient values
//   "noise"      response noise
//   "placement"  random support positions / signal-group choice / co-data
//                membership draws
//   "pvals"      SNP external p-values
// The blocked scenarios (main, group-sparse, null-groups) share one stream
// namespace for x/pi/coef/noise, so for a given seed they differ only in
// placement; in particular the null-groups scenario keeps the main
// scenario's signal counts exactly. Placement streams and the SNP scenario
// are namespaced by scenario name.

namespace codashrink {

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Main: return "main";
    case Scenario::GroupSparse: return "group-sparse";
    case Scenario::NullGroups: return "null-groups";
    case Scenario::SNP: return "snp";
  }
  throw data_error("unknown scenario");
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "main") return Scenario::Main;
  if (name == "group-sparse") return Scenario::GroupSparse;
  if (name == "null-groups") return Scenario::NullGroups;
  if (name == "snp") return Scenario::SNP;
  throw data_error("unknown scenario '" + name + "'");
}

std::vector<Index> SimInstance::true_support() const {
  std::vector<Index> support;
  for (Index j = 0; j < beta_true.size(); ++j)
    if (beta_true[j] != 0.0) support.push_back(j);
  return support;
}

Index largest_divisible(Index p, int G) {
  if (G < 1) throw data_error("largest_divisible: G must be >= 1");
  const Index pp = p - p % G;
  if (pp < G) throw data_error("largest_divisible: p too small for G groups");
  return pp;
}

namespace {

MatrixXd gaussian_design(Index n, Index p, std::uint64_t seed,
                         const std::string& scen) {
  MatrixXd X(n, p);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < p; ++j) {
    CounterRng rng(seed, stream_id(scen, "x", static_cast<std::uint64_t>(j)));
    for (Index i = 0; i < n; ++i) X(i, j) = rng.normal();
  }
  return X;
}

// Nonzero counts per signal group: round(pi_g * size) with pi_g ~ Beta(2,6),
// redrawn (bounded) if every count rounds to zero.
std::vector<Index> signal_counts(CounterRng& pi_rng, int n_signal,
                                 Index group_size) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Index> counts(static_cast<std::size_t>(n_signal));
    Index total = 0;
    for (int g = 0; g < n_signal; ++g) {
      const double pi = pi_rng.beta(2.0, 6.0);
      counts[static_cast<std::size_t>(g)] =
          static_cast<Index>(std::llround(pi * static_cast<double>(group_size)));
      total += counts[static_cast<std::size_t>(g)];
    }
    if (total > 0) return counts;
  }
  throw numeric_error("simgen: all signal counts rounded to zero repeatedly");
}

VectorXd scaled_t3_coefficients(CounterRng& coef_rng,
                                const std::vector<Index>& support, Index p) {
  VectorXd beta = VectorXd::Zero(p);
  for (Index j : support) beta[j] = coef_rng.student_t(3.0);
  const double ss = beta.squaredNorm();
  if (ss > 0.0) beta /= std::sqrt(ss);  // realized explained variance = 1
  return beta;
}

SimInstance gen_blocked(Index n, Index p, int G, int n_signal_groups,
                        bool random_signal_groups, bool scatter_support,
                        std::uint64_t seed, Scenario scenario) {
  if (n < 2) throw data_error("simgen: n must be >= 2");
  if (G < 1) throw data_error("simgen: G must be >= 1");
  if (p % G != 0)
    throw data_error("simgen: G = " + std::to_string(G) +
                     " does not divide p = " + std::to_string(p));
  if (n_signal_groups < 1 || n_signal_groups > G)
    throw data_error("simgen: signal group count out of range");

  const std::string scen = scenario_name(scenario);  // placement namespace
  const std::string shared = "blocked";  // x / pi / coef / noise namespace
  const Index group_size = p / G;

  SimInstance inst;
  inst.scenario = scenario;
  inst.seed = seed;
  inst.groups = equal_blocks(p, G);

  std::vector<int> signal_groups(static_cast<std::size_t>(n_signal_groups));
  if (random_signal_groups) {
    CounterRng place(seed, stream_id(scen, "placement"));
    const auto chosen = place.sample_without_replacement(G, n_signal_groups);
    for (int g = 0; g < n_signal_groups; ++g)
      signal_groups[static_cast<std::size_t>(g)] =
          static_cast<int>(chosen[static_cast<std::size_t>(g)]);
  } else {
    for (int g = 0; g < n_signal_groups; ++g)
      signal_groups[static_cast<std::size_t>(g)] = g;
  }

  CounterRng pi_rng(seed, stream_id(shared, "pi"));
  const auto counts = signal_counts(pi_rng, n_signal_groups, group_size);

  std::vector<Index> support;
  if (scatter_support) {
    Index total = 0;
    for (Index c : counts) total += c;
    CounterRng place(seed, stream_id(scen, "placement"));
    support = place.sample_without_replacement(p, total);
    std::sort(support.begin(), support.end());
  } else {
    for (int g = 0; g < n_signal_groups; ++g) {
      const Index start =
          static_cast<Index>(signal_groups[static_cast<std::size_t>(g)]) *
          group_size;
      for (Index k = 0; k < counts[static_cast<std::size_t>(g)]; ++k)
        support.push_back(start + k);
    }
  }

  CounterRng coef_rng(seed, stream_id(shared, "coef"));
  inst.beta_true = scaled_t3_coefficients(coef_rng, support, p);

  inst.d.X = gaussian_design(n, p, seed, shared);
  CounterRng noise(seed, stream_id(shared, "noise"));
  VectorXd eps(n);
  for (Index i = 0; i < n; ++i) eps[i] = noise.normal();
  inst.d.y = inst.d.X * inst.beta_true + eps;

  inst.codata = {grouped_source(inst.groups.assignments, "groups")};
  return inst;
}

}  // namespace

SimInstance gen_main(Index n, Index p, int G, std::uint64_t seed) {
  const int n_signal = (G + 2) / 3;  // ceil(G / 3)
  return gen_blocked(n, p, G, n_signal, false, false, seed, Scenario::Main);
}

SimInstance gen_group_sparse(Index n, Index p, int G, int n_signal_groups,
                             std::uint64_t seed) {
  return gen_blocked(n, p, G, n_signal_groups, true, false, seed,
                     Scenario::GroupSparse);
}

SimInstance gen_null_groups(Index n, Index p, int G, std::uint64_t seed) {
  const int n_signal = (G + 2) / 3;
  return gen_blocked(n, p, G, n_signal, false, true, seed,
                     Scenario::NullGroups);
}

SimInstance gen_snp(Index n, Index p, std::uint64_t seed, double noise_sd) {
  if (n < 2) throw data_error("gen_snp: n must be >= 2");
  constexpr Index kSignal = 150;
  if (p < kSignal)
    throw data_error("gen_snp: p must be at least 150");
  const std::string scen = scenario_name(Scenario::SNP);

  SimInstance inst;
  inst.scenario = Scenario::SNP;
  inst.seed = seed;

  CounterRng maf_rng(seed, stream_id(scen, "maf"));
  VectorXd maf(p);
  for (Index j = 0; j < p; ++j) maf[j] = 0.05 + 0.45 * maf_rng.uniform();

  inst.d.X.resize(n, p);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < p; ++j) {
    CounterRng rng(seed, stream_id(scen, "x", static_cast<std::uint64_t>(j)));
    for (Index i = 0; i < n; ++i)
      inst.d.X(i, j) = static_cast<double>(rng.binomial2(maf[j]));
  }

  CounterRng coef_rng(seed, stream_id(scen, "coef"));
  inst.beta_true = VectorXd::Zero(p);
  for (Index j = 0; j < kSignal; ++j)
    inst.beta_true[j] = 0.5 * coef_rng.normal();  // N(0, tau2 = 0.25)

  inst.d.y = inst.d.X * inst.beta_true;
  if (noise_sd > 0.0) {
    CounterRng noise(seed, stream_id(scen, "noise"));
    for (Index i = 0; i < n; ++i) inst.d.y[i] += noise_sd * noise.normal();
  }

  // grouped co-data: a small group enriched in signal
  Index small_total = 500, signal_in_small = 100;
  if (p != 10000) {
    small_total = std::max<Index>(2, std::llround(0.05 * static_cast<double>(p)));
    signal_in_small = std::min<Index>({100, small_total, kSignal});
    inst.warnings.push_back(
        "co-data group sizes scaled proportionally for p = " +
        std::to_string(p));
  }
  const Index nulls_in_small =
      std::min<Index>(small_total - signal_in_small, p - kSignal);

  CounterRng place(seed, stream_id(scen, "placement"));
  const auto signal_members =
      place.sample_without_replacement(kSignal, signal_in_small);
  const auto null_members =
      place.sample_without_replacement(p - kSignal, nulls_in_small);

  VectorXi assignments = VectorXi::Ones(p);  // group 1: large reference group
  for (Index j : signal_members) assignments[j] = 2;
  for (Index j : null_members) assignments[kSignal + j] = 2;
  inst.groups = group_structure_from_assignments(assignments);

  // continuous co-data: log external p-values
  CounterRng pval_rng(seed, stream_id(scen, "pvals"));
  VectorXd log_pvals(p);
  for (Index j = 0; j < p; ++j) {
    double pv;
    if (j < kSignal)
      pv = pval_rng.bernoulli(0.5) ? pval_rng.beta(0.1, 10.0)
                                   : pval_rng.beta(1.0, 5.0);
    else
      pv = pval_rng.uniform();
    log_pvals[j] = std::log(pv);
  }

  inst.codata = {grouped_source(assignments, "snp_groups"),
                 continuous_source(log_pvals, "log_pvalues")};
  return inst;
}

}  // namespace codashrink
