#pragma once

#include "codashrink/rng.hpp"
#include "codashrink/types.hpp"

namespace codashrink::testing {

inline MatrixXd random_matrix(Index n, Index p, std::uint64_t seed,
                              std::uint64_t stream = 0) {
  CounterRng rng(seed, stream_id("test", "matrix", stream));
  MatrixXd m(n, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = rng.normal();
  return m;
}

inline VectorXd random_vector(Index n, std::uint64_t seed,
                              std::uint64_t stream = 0) {
  CounterRng rng(seed, stream_id("test", "vector", stream));
  VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

inline Dataset random_dataset(Index n, Index p, std::uint64_t seed) {
  Dataset d;
  d.X = random_matrix(n, p, seed, 1);
  d.y = random_vector(n, seed, 2);
  return d;
}

// Gaussian response with a sparse truth on top of random design.
inline Dataset planted_dataset(Index n, Index p, Index k, double coef,
                               std::uint64_t seed) {
  Dataset d;
  d.X = random_matrix(n, p, seed, 3);
  VectorXd beta = VectorXd::Zero(p);
  CounterRng rng(seed, stream_id("test", "planted"));
  for (Index j = 0; j < k; ++j) beta[j] = coef * (rng.bernoulli(0.5) ? 1 : -1);
  d.y = d.X * beta + random_vector(n, seed, 4);
  return d;
}

}  // namespace codashrink::testing
