#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codashrink/codata.hpp"
#include "codashrink/types.hpp"

namespace codashrink {

enum class Scenario { Main, GroupSparse, NullGroups, SNP };

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

// One simulated repeat. Regeneration from (scenario, parameters, seed) is
// bit-identical; every random component draws from its own named counter
// stream (see the stream list in simgen.cpp), so adding repeats or
// components never perturbs existing draws.
struct SimInstance {
  Dataset d;
  VectorXd beta_true;
  GroupStructure groups;
  std::vector<CoDataSource> codata;
  std::uint64_t seed = 0;
  Scenario scenario = Scenario::Main;
  std::vector<std::string> warnings;

  std::vector<Index> true_support() const;
};

// Equal feature groups (requires G | p), the first ceil(G/3) carrying
// signal; per signal group the nonzero count is round(pi_g p / G) with
// pi_g ~ Beta(2,6); nonzero coefficients are iid t_3 rescaled so the
// realized sum of squares is exactly 1; x_ij iid N(0,1); y = X beta + N(0,1)
// noise.
SimInstance gen_main(Index n, Index p, int G, std::uint64_t seed);

// As gen_main but exactly n_signal_groups groups, drawn uniformly without
// replacement, carry the signal.
SimInstance gen_group_sparse(Index n, Index p, int G, int n_signal_groups,
                             std::uint64_t seed);

// Same signal sizes as gen_main for the same seed, but nonzero positions
// scattered uniformly over all p features; group labels are uninformative.
SimInstance gen_null_groups(Index n, Index p, int G, std::uint64_t seed);

// SNP design: MAFs M_j = 0.05 + 0.45 U, allele counts x_ij ~ Bin(2, M_j),
// 150 signal coefficients N(0, 0.25), noiseless response by default.
// Co-data: a grouped source whose small group is enriched in signal, and
// log external p-values (signal from a balanced Beta(0.1,10) / Beta(1,5)
// mixture, null uniform). Co-data sizes scale proportionally (with a
// warning) when p != 10000.
SimInstance gen_snp(Index n, Index p, std::uint64_t seed,
                    double noise_sd = 0.0);

// Largest p' <= p divisible by G; experiment runners substitute it when the
// requested p is not divisible.
Index largest_divisible(Index p, int G);

}  // namespace codashrink
