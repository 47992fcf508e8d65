#include "eot/sinkhorn.hpp"

#include "eot/core.hpp"
#include "eot/rng.hpp"
#include "eot/rounding.hpp"

#include <cmath>

namespace eot {

namespace {

constexpr double kScaleLimit = 300.0;  // |log scaling| above which updates go to the log domain

Matrix log_kernel(const EntropicProblem& prob, OpCounter* ops) {
  const auto nn = static_cast<std::uint64_t>(prob.cost().entries().size());
  ops::mul(ops, nn);
  ops::div(ops, 1);
  return prob.cost().entries() * (-1.0 / prob.eta());
}

void row_update(const Matrix& log_k, const Vector& log_p, ScalingPair& s, OpCounter* ops) {
  const Index n = log_k.rows();
  for (Index i = 0; i < n; ++i) {
    s.log_u[i] = log_p[i] - log_sum_exp(log_k.row(i).transpose() + s.log_v, ops);
  }
  ops::add(ops, static_cast<std::uint64_t>(n * n + n));
}

void col_update(const Matrix& log_k, const Vector& log_q, ScalingPair& s, OpCounter* ops) {
  const Index n = log_k.rows();
  for (Index j = 0; j < n; ++j) {
    s.log_v[j] = log_q[j] - log_sum_exp(log_k.col(j) + s.log_u, ops);
  }
  ops::add(ops, static_cast<std::uint64_t>(n * n + n));
}

Matrix plan_from_log_kernel(const Matrix& log_k, const ScalingPair& s, OpCounter* ops) {
  const auto nn = static_cast<std::uint64_t>(log_k.size());
  ops::add(ops, 2 * nn);
  ops::exp(ops, nn);
  return ((log_k.colwise() + s.log_u).rowwise() + s.log_v.transpose()).array().exp().matrix();
}

}  // namespace

Matrix plan_from_scalings(const ScalingPair& s, const EntropicProblem& prob, OpCounter* ops) {
  return plan_from_log_kernel(log_kernel(prob, ops), s, ops);
}

ScalingPair sinkhorn_step(const ScalingPair& s, const EntropicProblem& prob, Side side, OpCounter* ops) {
  const Matrix log_k = log_kernel(prob, ops);
  ScalingPair out = s;
  if (side == Side::Row) {
    const Vector log_p = prob.p().values().array().log();
    row_update(log_k, log_p, out, ops);
  } else {
    const Vector log_q = prob.q().values().array().log();
    col_update(log_k, log_q, out, ops);
  }
  return out;
}

SolveResult sinkhorn_solve(const EntropicProblem& prob, double tol, std::int64_t max_iters) {
  if (!(tol > 0.0)) throw Error(ErrorCode::BadParameter, "tolerance must be positive");
  if (max_iters <= 0) throw Error(ErrorCode::BadParameter, "iteration cap must be positive");
  SolveResult result;
  OpCounter* ops = &result.ops;
  const Index n = prob.size();
  const Matrix log_k = log_kernel(prob, ops);
  const Vector log_p = prob.p().values().array().log();
  const Vector log_q = prob.q().values().array().log();
  ops::log(ops, static_cast<std::uint64_t>(2 * n));

  ScalingPair s = ScalingPair::ones(n);
  Matrix x;
  for (std::int64_t it = 0; it < max_iters; ++it) {
    row_update(log_k, log_p, s, ops);
    col_update(log_k, log_q, s, ops);
    x = plan_from_log_kernel(log_k, s, ops);
    const double residual = marginal_residual(x, prob.p().values(), prob.q().values(), ops);
    result.residual_history.push_back(residual);
    result.iterations = it + 1;
    if (residual <= tol) {
      result.converged = true;
      break;
    }
  }
  result.epochs_run = result.iterations;
  result.lambda = s.log_v;
  result.plan = TransportPlan(std::move(x));
  return result;
}

double scalar_kl(double a, double b) {
  if (a == 0.0) return b;
  return a * std::log(a / b) - a + b;
}

Vector kl_violation(const Matrix& x, const Vector& p, const Vector& q) {
  const Index n = x.rows();
  const Vector rows = x.rowwise().sum();
  const Vector cols = x.colwise().sum().transpose();
  if (n > 0 && (rows.minCoeff() <= 0.0 || cols.minCoeff() <= 0.0))
    throw Error(ErrorCode::DegenerateRow, "plan has a zero row or column sum");
  Vector rho(2 * n);
  for (Index i = 0; i < n; ++i) rho[i] = std::max(0.0, scalar_kl(p[i], rows[i]));
  for (Index j = 0; j < n; ++j) rho[n + j] = std::max(0.0, scalar_kl(q[j], cols[j]));
  return rho;
}

Vector increasing_probability(const Vector& h, const IncreasingFn& g) {
  Vector w = g ? h.unaryExpr([&](double x) { return g(x); }) : h;
  const double total = w.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::AllZero, "increasing function vanished on every entry");
  return w / total;
}

double stochastic_row_update(const Vector& kernel_row, const Vector& v, double target) {
  return target / kernel_row.dot(v);
}

namespace {

// State of the stochastic solver. Row sums `r` and column sums `c` of the
// current plan are maintained incrementally.
class StochasticState {
 public:
  StochasticState(const EntropicProblem& prob, OpCounter* ops) : prob_(prob), ops_(ops), n_(prob.size()) {
    log_k_ = log_kernel(prob, ops_);
    kernel_ = log_k_.array().exp();
    ops::exp(ops_, static_cast<std::uint64_t>(n_ * n_));
    u_ = Vector::Ones(n_);
    v_ = Vector::Ones(n_);
    log_mode_ = (kernel_.array() <= 0.0).any() || (log_k_.array() < -kScaleLimit).any();
    if (log_mode_) enter_log_mode();
    refresh();
  }

  void refresh() {
    const auto nn = static_cast<std::uint64_t>(n_ * n_);
    Matrix x;
    if (log_mode_) {
      x = plan_from_log_kernel(log_k_, scalings_, ops_);
    } else {
      x = u_.asDiagonal() * kernel_ * v_.asDiagonal();
      ops::mul(ops_, 2 * nn);
    }
    r_ = x.rowwise().sum();
    c_ = x.colwise().sum().transpose();
    ops::add(ops_, 2 * nn);
  }

  double residual() const {
    ops::add(ops_, static_cast<std::uint64_t>(4 * n_));
    return (r_ - prob_.p().values()).lpNorm<1>() + (c_ - prob_.q().values()).lpNorm<1>();
  }

  void violation(Vector& rho) const {
    rho.resize(2 * n_);
    for (Index i = 0; i < n_; ++i) rho[i] = kl_or_inf(prob_.p()[i], r_[i]);
    for (Index j = 0; j < n_; ++j) rho[n_ + j] = kl_or_inf(prob_.q()[j], c_[j]);
    const auto m = static_cast<std::uint64_t>(2 * n_);
    ops::div(ops_, m);
    ops::log(ops_, m);
    ops::mul(ops_, m);
    ops::add(ops_, 2 * m);
    ops::cmp(ops_, m);
  }

  void update(Index coord) {
    if (coord < n_) {
      update_row(coord);
    } else {
      update_col(coord - n_);
    }
  }

  ScalingPair scalings() const {
    if (log_mode_) return scalings_;
    return {u_.array().log(), v_.array().log()};
  }

  Matrix plan() const {
    if (log_mode_) return plan_from_log_kernel(log_k_, scalings_, nullptr);
    return u_.asDiagonal() * kernel_ * v_.asDiagonal();
  }

  bool log_mode() const { return log_mode_; }

 private:
  static double kl_or_inf(double a, double b) {
    if (!(b > 0.0)) return std::numeric_limits<double>::max();
    return std::max(0.0, scalar_kl(a, b));
  }

  void enter_log_mode() {
    scalings_ = {u_.array().log(), v_.array().log()};
    log_mode_ = true;
  }

  void update_row(Index i) {
    const auto un = static_cast<std::uint64_t>(n_);
    const double target = prob_.p()[i];
    if (!log_mode_) {
      const double kv = kernel_.row(i).dot(v_);
      ops::mul(ops_, un);
      ops::add(ops_, un);
      const double u_new = target / kv;
      ops::div(ops_, 1);
      if (kv > 0.0 && std::isfinite(u_new) && std::abs(std::log(u_new)) < kScaleLimit) {
        const double du = u_new - u_[i];
        c_ += du * kernel_.row(i).transpose().cwiseProduct(v_);
        ops::mul(ops_, 2 * un);
        ops::add(ops_, un + 1);
        ops::log(ops_, 1);
        ops::cmp(ops_, 1);
        u_[i] = u_new;
        r_[i] = target;
        return;
      }
      enter_log_mode();
    }
    Vector t = log_k_.row(i).transpose() + scalings_.log_v;
    const Vector old_row = (t.array() + scalings_.log_u[i]).exp();
    scalings_.log_u[i] = std::log(target) - log_sum_exp(t, ops_);
    const Vector new_row = (t.array() + scalings_.log_u[i]).exp();
    c_ += new_row - old_row;
    r_[i] = target;
    ops::add(ops_, 5 * un + 1);
    ops::exp(ops_, 2 * un);
    ops::log(ops_, 1);
  }

  void update_col(Index j) {
    const auto un = static_cast<std::uint64_t>(n_);
    const double target = prob_.q()[j];
    if (!log_mode_) {
      const double ku = kernel_.col(j).dot(u_);
      ops::mul(ops_, un);
      ops::add(ops_, un);
      const double v_new = target / ku;
      ops::div(ops_, 1);
      if (ku > 0.0 && std::isfinite(v_new) && std::abs(std::log(v_new)) < kScaleLimit) {
        const double dv = v_new - v_[j];
        r_ += dv * kernel_.col(j).cwiseProduct(u_);
        ops::mul(ops_, 2 * un);
        ops::add(ops_, un + 1);
        ops::log(ops_, 1);
        ops::cmp(ops_, 1);
        v_[j] = v_new;
        c_[j] = target;
        return;
      }
      enter_log_mode();
    }
    Vector t = log_k_.col(j) + scalings_.log_u;
    const Vector old_col = (t.array() + scalings_.log_v[j]).exp();
    scalings_.log_v[j] = std::log(target) - log_sum_exp(t, ops_);
    const Vector new_col = (t.array() + scalings_.log_v[j]).exp();
    r_ += new_col - old_col;
    c_[j] = target;
    ops::add(ops_, 5 * un + 1);
    ops::exp(ops_, 2 * un);
    ops::log(ops_, 1);
  }

  const EntropicProblem& prob_;
  OpCounter* ops_;
  Index n_;
  Matrix log_k_;
  Matrix kernel_;
  Vector u_, v_;
  ScalingPair scalings_;
  Vector r_, c_;
  bool log_mode_ = false;
};

Index sample_coordinate(const Vector& h, Rng& rng, OpCounter* ops) {
  const double total = h.sum();
  const double u = rng.uniform() * total;
  double acc = 0.0;
  const Index m = h.size();
  Index k = 0;
  for (; k < m - 1; ++k) {
    acc += h[k];
    if (u < acc) break;
  }
  ops::add(ops, static_cast<std::uint64_t>(m + k + 1));
  ops::cmp(ops, static_cast<std::uint64_t>(k + 1));
  ops::mul(ops, 1);
  return k;
}

}  // namespace

SolveResult stochastic_sinkhorn_solve(const EntropicProblem& prob, const StochasticSinkhornOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::BadParameter, "tolerance must be positive");
  const Index n = prob.size();
  const double nd = static_cast<double>(n);
  const std::int64_t max_iters =
      opts.max_iters > 0 ? opts.max_iters : static_cast<std::int64_t>(std::min(4e9, 200.0 * nd * nd / opts.tol));
  const std::int64_t refresh_every = opts.refresh_every > 0 ? opts.refresh_every : static_cast<std::int64_t>(n);

  SolveResult result;
  OpCounter* ops = &result.ops;
  StochasticState state(prob, ops);
  Rng rng(opts.seed);
  Vector rho, h;

  std::int64_t it = 0;
  double residual = state.residual();
  while (true) {
    if (residual <= opts.tol) {
      result.converged = true;
      break;
    }
    if (it >= max_iters) break;
    state.violation(rho);
    if (opts.g) {
      h = rho.unaryExpr([&](double x) { return opts.g(x); });
      ops::add(ops, static_cast<std::uint64_t>(rho.size()));
    } else {
      h = rho;
    }
    state.update(sample_coordinate(h, rng, ops));
    ++it;
    if (it % refresh_every == 0) state.refresh();
    residual = state.residual();
    if (it % refresh_every == 0) result.residual_history.push_back(residual);
  }
  result.iterations = it;
  result.epochs_run = it;
  result.residual_history.push_back(residual);
  const ScalingPair s = state.scalings();
  result.lambda = s.log_v;
  result.plan = TransportPlan(state.plan());
  return result;
}

namespace {

template <typename Solve>
ApproxResult approximate_with(const CostMatrix& c, const SimplexVector& p, const SimplexVector& q, double eps,
                              Solve&& solve) {
  const Index n = c.size();
  if (p.size() != n || q.size() != n) throw Error(ErrorCode::ShapeMismatch, "marginal length differs from cost");
  ApproxResult out;
  if (n >= 2 && c.max_abs() == 0.0) {
    out.plan = TransportPlan(p.values() * q.values().transpose());
    out.params.eps = eps;
    out.converged = true;
    return out;
  }
  out.params = derive_params(eps, c, n);
  const auto [ps, qs] = smooth_marginals(p, q, out.params.eps_prime);
  const EntropicProblem prob(c, ps, qs, out.params.eta);
  out.solve = solve(prob, out.params.eps_prime / 2.0);
  out.ops = out.solve.ops;
  out.plan = round_to_feasible(out.solve.plan, p, q, &out.ops);
  out.converged = out.solve.converged;
  return out;
}

}  // namespace

ApproxResult approximate_ot_stochastic(const CostMatrix& c, const SimplexVector& p, const SimplexVector& q,
                                       double eps, std::uint64_t seed, std::int64_t max_iters) {
  return approximate_with(c, p, q, eps, [&](const EntropicProblem& prob, double tol) {
    StochasticSinkhornOptions opts;
    opts.tol = tol;
    opts.seed = seed;
    opts.max_iters = max_iters;
    return stochastic_sinkhorn_solve(prob, opts);
  });
}

ApproxResult approximate_ot_sinkhorn(const CostMatrix& c, const SimplexVector& p, const SimplexVector& q, double eps,
                                     std::int64_t max_iters) {
  return approximate_with(c, p, q, eps, [&](const EntropicProblem& prob, double tol) {
    return sinkhorn_solve(prob, tol, max_iters > 0 ? max_iters : 1000000);
  });
}

}  // namespace eot
