#include "eot/core.hpp"

#include <cmath>

namespace eot {

namespace {

void require_same(Index a, Index b, const char* what) {
  if (a != b) throw Error(ErrorCode::ShapeMismatch, what);
}

}  // namespace

double transport_cost(const CostMatrix& c, const TransportPlan& x, OpCounter* ops) {
  require_same(c.size(), x.size(), "cost and plan dimensions differ");
  const auto nn = static_cast<std::uint64_t>(c.entries().size());
  ops::mul(ops, nn);
  ops::add(ops, nn);
  return c.entries().cwiseProduct(x.entries()).sum();
}

double marginal_residual(const Matrix& x, const Vector& p, const Vector& q, OpCounter* ops) {
  require_same(x.rows(), p.size(), "plan rows differ from p");
  require_same(x.cols(), q.size(), "plan cols differ from q");
  const auto nn = static_cast<std::uint64_t>(x.size());
  const auto n = static_cast<std::uint64_t>(p.size() + q.size());
  ops::add(ops, 2 * nn + 2 * n);
  return (x.rowwise().sum() - p).lpNorm<1>() + (x.colwise().sum().transpose() - q).lpNorm<1>();
}

double marginal_residual(const TransportPlan& x, const SimplexVector& p, const SimplexVector& q, OpCounter* ops) {
  return marginal_residual(x.entries(), p.values(), q.values(), ops);
}

double entropic_objective(const CostMatrix& c, const Matrix& x, double eta, OpCounter* ops) {
  require_same(c.size(), x.rows(), "cost and plan dimensions differ");
  const auto nn = static_cast<std::uint64_t>(x.size());
  ops::mul(ops, 2 * nn);
  ops::add(ops, 2 * nn);
  ops::log(ops, nn);
  return c.entries().cwiseProduct(x).sum() - eta * entropy(x);
}

ApproxParams derive_params(double eps, const CostMatrix& c, Index n) {
  if (n < 2) throw Error(ErrorCode::TooSmallProblem, "need n >= 2 (log n must be positive)");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::BadParameter, "eps must be positive");
  if (!(c.max_abs() > 0.0)) throw Error(ErrorCode::ZeroCost, "every coupling is optimal for a zero cost");
  ApproxParams params;
  params.eps = eps;
  params.eta = eps / (4.0 * std::log(static_cast<double>(n)));
  params.eps_prime = eps / (8.0 * c.max_abs());
  return params;
}

std::pair<SimplexVector, SimplexVector> smooth_marginals(const SimplexVector& p, const SimplexVector& q,
                                                         double eps_prime) {
  if (!(eps_prime > 0.0) || !(eps_prime / 8.0 < 1.0))
    throw Error(ErrorCode::BadEpsPrime, "need 0 < eps' < 8");
  require_same(p.size(), q.size(), "marginals differ in length");
  const double n = static_cast<double>(p.size());
  const double keep = 1.0 - eps_prime / 8.0;
  const double floor = eps_prime / (8.0 * n);
  auto shrink = [&](const Vector& v) {
    Vector out = (keep * v.array() + floor).matrix();
    // Affine shrink preserves mass up to rounding; fold the rounding residue
    // into the largest entry so the result passes the 1e-12 simplex check.
    Index k = 0;
    out.maxCoeff(&k);
    out[k] += 1.0 - out.sum();
    return SimplexVector(std::move(out));
  };
  return {shrink(p.values()), shrink(q.values())};
}

}  // namespace eot
