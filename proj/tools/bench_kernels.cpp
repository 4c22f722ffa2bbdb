// Benchmark of the blocked OpenMP kernels against the serial reference
// implementations, over the shapes the marginal-likelihood fits actually
// use. Prints one table row per kernel and shape.

#include <Eigen/Dense>
#include <cstdio>
#include <omp.h>

#include "codashrink/kernels.hpp"
#include "codashrink/rng.hpp"

using namespace codashrink;

namespace {

MatrixXd random_matrix(Index n, Index p, std::uint64_t stream) {
  CounterRng rng(42, stream);
  MatrixXd m(n, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = rng.normal();
  return m;
}

template <typename F>
double time_best_of(int tries, F&& fn) {
  double best = 1e300;
  for (int t = 0; t < tries; ++t) {
    const double t0 = omp_get_wtime();
    fn();
    best = std::min(best, omp_get_wtime() - t0);
  }
  return best;
}

double max_abs_diff(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

void bench_shape(Index n, Index p, int tries) {
  const MatrixXd X = random_matrix(n, p, 1);
  const VectorXd w =
      random_matrix(p, 1, 2).col(0).array().abs() + 0.1;
  const VectorXd b = random_matrix(n, 1, 3).col(0);

  MatrixXd gram_omp, gram_ref;
  const double t_gram_omp =
      time_best_of(tries, [&] { gram_omp = kernels::weighted_gram(X, w); });
  const double t_gram_ref = time_best_of(
      tries, [&] { gram_ref = kernels::ref::weighted_gram(X, w); });

  MatrixXd sigma = gram_omp;
  sigma.diagonal().array() += 1.0;
  const Eigen::LLT<MatrixXd> llt(sigma);
  const MatrixXd L = llt.matrixLLT();

  MatrixXd solve_omp, solve_ref;
  const double t_solve_omp = time_best_of(
      tries, [&] { solve_omp = kernels::lower_solve_columns(L, X); });
  const double t_solve_ref = time_best_of(
      tries, [&] { solve_ref = kernels::ref::lower_solve_columns(L, X); });

  VectorXd t_omp, s_omp, t_ref, s_ref;
  const double t_quad_omp = time_best_of(
      tries, [&] { kernels::column_quadratics(solve_omp, b, t_omp, s_omp); });
  const double t_quad_ref = time_best_of(tries, [&] {
    kernels::ref::column_quadratics(solve_omp, b, t_ref, s_ref);
  });

  std::printf("%6td %6td  weighted_gram   %9.4f %9.4f %6.2fx   %.2e\n", n, p,
              t_gram_ref, t_gram_omp, t_gram_ref / t_gram_omp,
              max_abs_diff(gram_ref, gram_omp));
  std::printf("%6td %6td  solve_columns   %9.4f %9.4f %6.2fx   %.2e\n", n, p,
              t_solve_ref, t_solve_omp, t_solve_ref / t_solve_omp,
              max_abs_diff(solve_ref, solve_omp));
  std::printf("%6td %6td  col_quadratics  %9.4f %9.4f %6.2fx   %.2e\n", n, p,
              t_quad_ref, t_quad_omp, t_quad_ref / t_quad_omp,
              std::max((t_ref - t_omp).cwiseAbs().maxCoeff(),
                       (s_ref - s_omp).cwiseAbs().maxCoeff()));
}

}  // namespace

int main(int argc, char** argv) {
  int tries = 3;
  if (argc > 1) tries = std::atoi(argv[1]);
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%6s %6s  %-15s %9s %9s %7s   %s\n", "n", "p", "kernel",
              "ref[s]", "omp[s]", "speedup", "max|diff|");
  bench_shape(200, 1980, tries);
  bench_shape(500, 10000, tries);
  return 0;
}
