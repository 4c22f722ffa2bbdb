#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace codashrink {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// The 64-bit key carries the user seed; the 128-bit counter is split into a
// 64-bit stream id (upper words) and a 64-bit draw counter (lower words).
// Named streams derived from one seed are therefore independent and can be
// consumed in any order, so adding repeats or generating columns in
// parallel never perturbs draws elsewhere.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// FNV-1a over the scenario/component names plus an index; used to derive
// stream ids for `CounterRng`.
std::uint64_t stream_id(std::string_view scenario, std::string_view component,
                        std::uint64_t index = 0);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  double uniform();  // open interval (0, 1)
  double normal();   // N(0, 1), Box-Muller with a cached spare

  // Marsaglia-Tsang squeeze; shape < 1 handled by the boost trick
  // gamma(a) = gamma(a + 1) * U^{1/a}.
  double gamma(double shape);
  double beta(double a, double b);
  double chi_squared(double dof);
  double student_t(double dof);
  int bernoulli(double prob);
  int binomial2(double prob);  // Bin(2, prob) as two Bernoulli draws

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);

  // First k entries of a Fisher-Yates shuffle of 0..n-1.
  std::vector<Eigen::Index> sample_without_replacement(Eigen::Index n,
                                                       Eigen::Index k);
  void shuffle(std::vector<Eigen::Index>& values);

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace codashrink
