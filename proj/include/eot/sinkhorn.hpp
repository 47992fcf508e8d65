#ifndef EOT_SINKHORN_HPP
#define EOT_SINKHORN_HPP

#include "eot/op_counter.hpp"
#include "eot/solve_result.hpp"
#include "eot/types.hpp"

#include <cstdint>
#include <functional>

namespace eot {

/// Sinkhorn scalings in the log domain: X = diag(e^log_u) exp(-C/eta) diag(e^log_v).
struct ScalingPair {
  Vector log_u;
  Vector log_v;

  static ScalingPair ones(Index n) { return {Vector::Zero(n), Vector::Zero(n)}; }
};

enum class Side { Row, Col };

Matrix plan_from_scalings(const ScalingPair& s, const EntropicProblem& prob, OpCounter* ops = nullptr);

/// Rescales every row (or column) so that it matches p' (or q') exactly.
ScalingPair sinkhorn_step(const ScalingPair& s, const EntropicProblem& prob, Side side, OpCounter* ops = nullptr);

/// Alternating Row/Col steps until the marginal residual is at most tol.
/// `iterations` counts full Row+Col sweeps.
SolveResult sinkhorn_solve(const EntropicProblem& prob, double tol, std::int64_t max_iters);

/// Scalar KL(a||b) = a log(a/b) - a + b for a > 0, b > 0 (and 0 log 0 = 0).
double scalar_kl(double a, double b);

/// [KL(p_i || (X1)_i)]_i stacked on [KL(q_j || (X^T 1)_j)]_j.
Vector kl_violation(const Matrix& x, const Vector& p, const Vector& q);

using IncreasingFn = std::function<double(double)>;

/// Psi(h)_i = g(h_i) / sum_j g(h_j).
Vector increasing_probability(const Vector& h, const IncreasingFn& g = {});

struct StochasticSinkhornOptions {
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::int64_t max_iters = 0;      // 0 selects 200 n^2 / tol (well past the theoretical bound)
  std::int64_t refresh_every = 0;  // exact marginal recomputation period; 0 selects n
  IncreasingFn g;                  // empty selects the identity
};

/// Greedy-in-expectation single-coordinate Sinkhorn: sample a row or column
/// with probability Psi(KL violation) and rescale it to its target marginal.
/// Row/column sums are maintained incrementally so each update costs O(n).
/// Runs with multiplicative scalings and switches to log-domain updates once a
/// scaling leaves [e^-300, e^300] or exp(-C/eta) underflows.
SolveResult stochastic_sinkhorn_solve(const EntropicProblem& prob, const StochasticSinkhornOptions& opts);

/// Rescaling rule of a single coordinate in the multiplicative domain:
/// returns the new u_I = p'_I / (K v)_I given row I of K.
double stochastic_row_update(const Vector& kernel_row, const Vector& v, double target);

ApproxResult approximate_ot_stochastic(const CostMatrix& c, const SimplexVector& p, const SimplexVector& q,
                                       double eps, std::uint64_t seed, std::int64_t max_iters = 0);

/// Same pipeline with classical Sinkhorn as the inner solver.
ApproxResult approximate_ot_sinkhorn(const CostMatrix& c, const SimplexVector& p, const SimplexVector& q, double eps,
                                     std::int64_t max_iters = 0);

}  // namespace eot

#endif  // EOT_SINKHORN_HPP
