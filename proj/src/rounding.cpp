#include "eot/rounding.hpp"

#include <algorithm>

namespace eot {

namespace {

double shrink_factor(double target, double current) {
  if (current <= 0.0) return 1.0;
  return std::min(target / current, 1.0);
}

}  // namespace

Matrix round_to_feasible(const Matrix& x, const Vector& p, const Vector& q, OpCounter* ops) {
  const Index n = x.rows();
  if (x.cols() != n || p.size() != n || q.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "rounding needs an n x n plan and length-n marginals");
  if (n > 0 && x.minCoeff() < 0.0) throw Error(ErrorCode::NegativeEntry, "rounding needs a nonnegative plan");
  const auto un = static_cast<std::uint64_t>(n);

  Matrix out = x;
  const Vector rows = out.rowwise().sum();
  for (Index i = 0; i < n; ++i) out.row(i) *= shrink_factor(p[i], rows[i]);
  ops::add(ops, un * un);
  ops::div(ops, un);
  ops::cmp(ops, un);
  ops::mul(ops, un * un);

  const Vector cols = out.colwise().sum().transpose();
  for (Index j = 0; j < n; ++j) out.col(j) *= shrink_factor(q[j], cols[j]);
  ops::add(ops, un * un);
  ops::div(ops, un);
  ops::cmp(ops, un);
  ops::mul(ops, un * un);

  const Vector err_p = (p - out.rowwise().sum()).cwiseMax(0.0);
  const Vector err_q = (q - out.colwise().sum().transpose()).cwiseMax(0.0);
  const double mass = err_p.sum();
  ops::add(ops, 2 * un * un + 3 * un);
  ops::cmp(ops, 2 * un);
  if (mass > 0.0) {
    out.noalias() += (err_p / mass) * err_q.transpose();
    ops::div(ops, un);
    ops::mul(ops, un * un);
    ops::add(ops, un * un);
  }
  return out;
}

TransportPlan round_to_feasible(const TransportPlan& x, const SimplexVector& p, const SimplexVector& q,
                                OpCounter* ops) {
  return TransportPlan(round_to_feasible(x.entries(), p.values(), q.values(), ops));
}

}  // namespace eot
