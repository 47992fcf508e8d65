#ifndef EOT_CORE_HPP
#define EOT_CORE_HPP

#include "eot/op_counter.hpp"
#include "eot/types.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace eot {

/// Stabilized log(sum_k exp(x_k)). Returns -inf for an empty or all -inf input.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& x, OpCounter* ops = nullptr) {
  using Scalar = typename Derived::Scalar;
  const auto n = static_cast<std::uint64_t>(x.size());
  if (n == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar m = x.maxCoeff();
  if (!std::isfinite(m)) return m;
  const Scalar s = (x.derived().array() - m).exp().sum();
  ops::cmp(ops, n);
  ops::add(ops, 2 * n);
  ops::exp(ops, n);
  ops::log(ops, 1);
  return m + std::log(s);
}

/// H(X) = -sum X log X with 0 log 0 = 0.
template <typename Derived>
typename Derived::Scalar entropy(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return -x.derived().unaryExpr([](Scalar v) { return v > Scalar(0) ? v * std::log(v) : Scalar(0); }).sum();
}

inline double entropy(const TransportPlan& x) { return entropy(x.entries()); }

double transport_cost(const CostMatrix& c, const TransportPlan& x, OpCounter* ops = nullptr);

/// ||X1 - p||_1 + ||X^T 1 - q||_1.
double marginal_residual(const TransportPlan& x, const SimplexVector& p, const SimplexVector& q,
                         OpCounter* ops = nullptr);
double marginal_residual(const Matrix& x, const Vector& p, const Vector& q, OpCounter* ops = nullptr);

/// Entropic primal objective <C,X> - eta H(X).
double entropic_objective(const CostMatrix& c, const Matrix& x, double eta, OpCounter* ops = nullptr);

/// eta = eps / (4 ln n), eps' = eps / (8 ||C||_inf).
ApproxParams derive_params(double eps, const CostMatrix& c, Index n);

/// Shrinks both marginals toward uniform by eps'/8 so every entry is at least eps'/(8n).
std::pair<SimplexVector, SimplexVector> smooth_marginals(const SimplexVector& p, const SimplexVector& q,
                                                         double eps_prime);

}  // namespace eot

#endif  // EOT_CORE_HPP
