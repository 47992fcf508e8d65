#include "eot/pdasmd.hpp"

#include "eot/core.hpp"
#include "eot/rounding.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace eot {

Schedule schedule(std::int64_t s, double l_bar, std::int64_t batch) {
  Schedule out;
  out.tau1 = 2.0 / (static_cast<double>(s) + 4.0);
  out.tau2 = 1.0 / (2.0 * static_cast<double>(batch));
  out.alpha = 1.0 / (9.0 * out.tau1 * l_bar);
  return out;
}

ComponentSampler::ComponentSampler(const SmoothnessProfile& profile) {
  const Index n = profile.per_component.size();
  weights_.resize(n);
  cumulative_.resize(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    weights_[i] = profile.sampling_weight(i);
    acc += weights_[i];
    cumulative_[static_cast<std::size_t>(i)] = acc;
  }
}

Index ComponentSampler::draw(Rng& rng) const {
  // Scale by the realized total so rounding in the cumulative sum never
  // leaves a gap at the top end.
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto k = std::min<std::ptrdiff_t>(it - cumulative_.begin(), static_cast<std::ptrdiff_t>(cumulative_.size()) - 1);
  return static_cast<Index>(k);
}

void ComponentSampler::draw(Rng& rng, std::int64_t count, std::vector<Index>& out) const {
  out.resize(static_cast<std::size_t>(count));
  for (auto& idx : out) idx = draw(rng);
}

std::vector<Index> sample_components(const SmoothnessProfile& profile, std::int64_t batch, Rng& rng) {
  std::vector<Index> out;
  ComponentSampler(profile).draw(rng, batch, out);
  return out;
}

namespace {

// Adds (1/B) sum_i (grad phi_i(v) - grad phi_i(v_tilde))/(n p_i) to grad.
// grad phi_i = n p'_i (softmax_i - q') so the q' terms cancel and each
// correction is (p'_i/p_i)(softmax_i(v) - softmax_i(v_tilde)).
void add_correction(ConstVecRef v, ConstVecRef v_tilde, const std::vector<Index>& indices, const Vector& weights,
                    const EntropicProblem& prob, Vector& grad, Vector& sv, Vector& st, OpCounter* ops) {
  const auto un = static_cast<std::uint64_t>(prob.size());
  const double inv_b = 1.0 / static_cast<double>(indices.size());
  ops::div(ops, 1);
  for (const Index i : indices) {
    softmax_row(i, v, prob, sv, ops);
    softmax_row(i, v_tilde, prob, st, ops);
    const double scale = inv_b * prob.p()[i] / weights[i];
    grad += scale * (sv - st);
    ops::mul(ops, 2 + un);
    ops::div(ops, 1);
    ops::add(ops, 2 * un);
  }
}

}  // namespace

Vector reduced_gradient(ConstVecRef v, ConstVecRef v_tilde, ConstVecRef mu, const std::vector<Index>& indices,
                        const SmoothnessProfile& profile, const EntropicProblem& prob, OpCounter* ops) {
  if (indices.empty()) throw Error(ErrorCode::BadParameter, "reduced gradient needs at least one index");
  Vector weights(profile.per_component.size());
  for (Index i = 0; i < weights.size(); ++i) weights[i] = profile.sampling_weight(i);
  Vector grad = mu;
  Vector sv, st;
  add_correction(v, v_tilde, indices, weights, prob, grad, sv, st, ops);
  return grad;
}

Vector mirror_step_z(ConstVecRef z, ConstVecRef grad, double alpha) { return z - alpha * grad; }

Vector prox_step_y(ConstVecRef v, ConstVecRef grad, double l_bar, NormKind norm_kind) {
  if (norm_kind == NormKind::L2) return v - grad / (9.0 * l_bar);
  const double step = grad.lpNorm<1>() / (9.0 * l_bar);
  return v - step * grad.unaryExpr([](double g) { return g > 0.0 ? 1.0 : -1.0; });
}

std::int64_t default_inner_loops(Index n, std::int64_t batch) {
  return std::max<std::int64_t>(1, (static_cast<std::int64_t>(n) + batch - 1) / batch);
}

std::int64_t default_max_epochs(const EntropicProblem& prob, NormKind norm_kind, std::int64_t inner_loops,
                                double stop_residual, double stop_gap) {
  const double n = static_cast<double>(prob.size());
  const double eta = prob.eta();
  const bool linf = norm_kind == NormKind::LInf;
  const double l_bar = (linf ? 5.0 : 1.0) / eta;
  const double gamma = linf ? n : 1.0;
  // Dual radius eta (||C||/eta + 1/2), in the norm of the geometry.
  double radius = prob.cost().max_abs() + 0.5 * eta;
  if (!linf) radius *= std::sqrt(n);
  const double spread = 2.0 * l_bar * (1.0 + 18.0 * gamma / static_cast<double>(inner_loops));
  double s = 1.0;
  if (stop_residual > 0.0) s = std::max(s, std::sqrt(spread * radius / stop_residual));
  if (stop_gap > 0.0) s = std::max(s, std::sqrt(spread * radius * radius / stop_gap));
  return 10 * static_cast<std::int64_t>(std::ceil(s));
}

SolveResult pdasmd_solve(const EntropicProblem& prob, const SolverConfig& cfg) {
  if (cfg.batch != 1) throw Error(ErrorCode::BadParameter, "pdasmd_solve is the single-sample variant (B = 1)");
  return pdasmd_batch_solve(prob, cfg, nullptr);
}

SolveResult pdasmd_batch_solve(const EntropicProblem& prob, const SolverConfig& cfg) {
  return pdasmd_batch_solve(prob, cfg, nullptr);
}

// Random stream order per epoch: one uniform index choosing which y iterate
// becomes y_tilde, then B component draws per inner iteration.
SolveResult pdasmd_batch_solve(const EntropicProblem& prob, const SolverConfig& cfg, TraceSink* trace) {
  const Index n = prob.size();
  const auto un = static_cast<std::uint64_t>(n);
  if (cfg.batch < 1 || cfg.batch > n) throw Error(ErrorCode::BadParameter, "batch size must lie in [1, n]");
  if (cfg.inner_loops < 0 || cfg.max_epochs < 0) throw Error(ErrorCode::BadParameter, "negative loop counts");

  const std::int64_t l = cfg.inner_loops > 0 ? cfg.inner_loops : default_inner_loops(n, cfg.batch);
  const std::int64_t max_epochs =
      cfg.max_epochs > 0 ? cfg.max_epochs
                         : default_max_epochs(prob, cfg.norm_kind, l, cfg.stop_residual, cfg.stop_gap);

  const SmoothnessProfile profile = smoothness_constants(prob, cfg.norm_kind);
  const double l_bar = profile.mean;
  const ComponentSampler sampler(profile);
  Rng rng(cfg.seed);

  SolveResult result;
  OpCounter* ops = &result.ops;

  Vector y = Vector::Zero(n), z = Vector::Zero(n), v_tilde = Vector::Zero(n);
  Vector v(n), grad(n), y_sum(n), y_pick(n), sv, st, sign(n);
  Vector mu;
  double phi_tilde = semidual_value_and_grad(v_tilde, prob, mu, ops);
  Matrix d_acc = Matrix::Zero(n, n);
  double c_acc = 0.0;
  std::vector<Index> indices;
  const Vector& p = prob.p().values();
  const Vector& q = prob.q().values();

  std::int64_t k = 0;
  for (std::int64_t s = 0; s < max_epochs; ++s) {
    const Schedule sch = schedule(s, l_bar, cfg.batch);
    const double keep_y = 1.0 - sch.tau1 - sch.tau2;
    const auto pick = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(l)));
    y_sum.setZero();

    for (std::int64_t j = 0; j < l; ++j, ++k) {
      v = sch.tau1 * z + sch.tau2 * v_tilde + keep_y * y;
      assert(((v - (sch.tau1 * z + sch.tau2 * v_tilde + (1.0 - sch.tau1 - sch.tau2) * y)).array().abs() == 0.0).all());
      ops::mul(ops, 3 * un);
      ops::add(ops, 2 * un);

      sampler.draw(rng, cfg.batch, indices);
      ops::cmp(ops, static_cast<std::uint64_t>(cfg.batch) *
                        static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(n) + 1.0))));

      grad = mu;
      add_correction(v, v_tilde, indices, sampler.weights(), prob, grad, sv, st, ops);

      z -= sch.alpha * grad;
      ops::mul(ops, un);
      ops::add(ops, un);

      if (cfg.norm_kind == NormKind::L2) {
        y = v - grad / (9.0 * l_bar);
        ops::div(ops, un);
        ops::add(ops, un);
      } else {
        const double step = grad.lpNorm<1>() / (9.0 * l_bar);
        sign = grad.unaryExpr([](double g) { return g > 0.0 ? 1.0 : -1.0; });
        y = v - step * sign;
        ops::add(ops, 2 * un);
        ops::cmp(ops, un);
        ops::mul(ops, un);
        ops::div(ops, 1);
      }
      y_sum += y;
      ops::add(ops, un);
      if (j == pick) y_pick = y;
      if (trace) trace->on_inner(k, v, y, z);
    }

    v_tilde = y_sum / static_cast<double>(l);
    ops::div(ops, un);
    if (!v_tilde.allFinite() || !z.allFinite())
      throw Error(ErrorCode::NonFinite, "dual iterates overflowed; eta is too small for double precision");

    const double w = 1.0 / sch.tau1;
    c_acc += w;
    d_acc += w * primal_from_dual(y_pick, prob, ops);
    ops::add(ops, un * un + 1);
    ops::mul(ops, un * un);
    ops::div(ops, 1);

    const Matrix x = d_acc / c_acc;
    ops::div(ops, un * un);
    const double residual = marginal_residual(x, p, q, ops);
    phi_tilde = semidual_value_and_grad(v_tilde, prob, mu, ops);
    const double gap = entropic_objective(prob.cost(), x, prob.eta(), ops) + phi_tilde;
    ops::add(ops, 1);
    result.residual_history.push_back(residual);
    result.gap_history.push_back(gap);
    result.epochs_run = s + 1;

    const bool targets_set = cfg.stop_residual > 0.0 || cfg.stop_gap > 0.0;
    if (targets_set && residual <= cfg.stop_residual && gap <= cfg.stop_gap) {
      result.converged = true;
      break;
    }
  }

  result.iterations = k;
  result.lambda = v_tilde;
  result.plan = TransportPlan(d_acc / c_acc);
  return result;
}

ApproxResult approximate_ot(const CostMatrix& c, const SimplexVector& p, const SimplexVector& q, double eps,
                            SolverConfig cfg) {
  const Index n = c.size();
  if (p.size() != n || q.size() != n) throw Error(ErrorCode::ShapeMismatch, "marginal length differs from cost");
  ApproxResult out;
  if (n >= 2 && c.max_abs() == 0.0) {
    // Every coupling costs zero.
    out.plan = TransportPlan(p.values() * q.values().transpose());
    out.params.eps = eps;
    out.converged = true;
    return out;
  }
  out.params = derive_params(eps, c, n);
  const auto [ps, qs] = smooth_marginals(p, q, out.params.eps_prime);
  const EntropicProblem prob(c, ps, qs, out.params.eta);

  cfg.stop_residual = out.params.eps_prime / 2.0;
  cfg.stop_gap = eps / 4.0;
  out.solve = pdasmd_batch_solve(prob, cfg);
  out.ops = out.solve.ops;
  out.plan = round_to_feasible(out.solve.plan, p, q, &out.ops);
  out.converged = out.solve.converged;
  return out;
}

}  // namespace eot
