#ifndef EOT_TEST_UTIL_HPP
#define EOT_TEST_UTIL_HPP

#include "eot/rng.hpp"
#include "eot/types.hpp"

namespace eot::testing {

inline Vector random_vector(Index n, Rng& rng, double lo, double hi) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

inline Matrix random_matrix(Index n, Rng& rng, double lo, double hi) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

/// Strictly positive simplex vector with entries bounded away from zero.
inline SimplexVector random_simplex(Index n, Rng& rng, double floor = 0.05) {
  Vector w = random_vector(n, rng, floor, 1.0);
  w /= w.sum();
  Index k = 0;
  w.maxCoeff(&k);
  w[k] += 1.0 - w.sum();
  return SimplexVector(std::move(w));
}

/// Random simplex vector that may contain exact zeros.
inline SimplexVector random_sparse_simplex(Index n, Rng& rng) {
  Vector w = random_vector(n, rng, 0.0, 1.0);
  for (Index i = 0; i < n; ++i)
    if (rng.uniform() < 0.3) w[i] = 0.0;
  if (w.sum() == 0.0) w[0] = 1.0;
  w /= w.sum();
  Index k = 0;
  w.maxCoeff(&k);
  w[k] += 1.0 - w.sum();
  return SimplexVector(std::move(w));
}

inline EntropicProblem random_problem(Index n, Rng& rng, double eta, double cost_scale = 1.0) {
  return EntropicProblem(CostMatrix(random_matrix(n, rng, 0.0, cost_scale)), random_simplex(n, rng),
                         random_simplex(n, rng), eta);
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace eot::testing

#endif  // EOT_TEST_UTIL_HPP
