#include "eot/semidual.hpp"

#include "eot/core.hpp"

#include <cmath>

namespace eot {

namespace {

// Scaled row (lambda - C_i.)/eta.
void scaled_row(Index i, ConstVecRef lambda, const EntropicProblem& prob, Vector& out, OpCounter* ops) {
  const Index n = prob.size();
  const double inv_eta = 1.0 / prob.eta();
  out = (lambda - prob.cost().entries().row(i).transpose()) * inv_eta;
  ops::add(ops, n);
  ops::mul(ops, n);
}

// Writes exp(t - max t) into t and returns (max, sum).
std::pair<double, double> shifted_exp(Vector& t, OpCounter* ops) {
  const auto n = static_cast<std::uint64_t>(t.size());
  const double m = t.maxCoeff();
  t = (t.array() - m).exp();
  const double s = t.sum();
  ops::cmp(ops, n);
  ops::add(ops, 2 * n);
  ops::exp(ops, n);
  return {m, s};
}

void check_index(Index i, Index n) {
  if (i < 0 || i >= n) throw Error(ErrorCode::IndexOutOfRange, "component index out of range");
}

}  // namespace

void softmax_row(Index i, ConstVecRef lambda, const EntropicProblem& prob, Vector& out, OpCounter* ops) {
  scaled_row(i, lambda, prob, out, ops);
  const auto [m, s] = shifted_exp(out, ops);
  (void)m;
  out *= 1.0 / s;
  ops::div(ops, 1);
  ops::mul(ops, static_cast<std::uint64_t>(out.size()));
}

Vector tau_of_lambda(ConstVecRef lambda, const EntropicProblem& prob) {
  const Index n = prob.size();
  const double eta = prob.eta();
  Vector tau(n);
  Vector t;
  for (Index i = 0; i < n; ++i) {
    scaled_row(i, lambda, prob, t, nullptr);
    // logsumexp((lambda - C_i - eta)/eta) = logsumexp((lambda - C_i)/eta) - 1
    tau[i] = eta * std::log(prob.p()[i]) - eta * (log_sum_exp(t) - 1.0);
  }
  return tau;
}

double semidual_value(ConstVecRef lambda, const EntropicProblem& prob, OpCounter* ops) {
  Vector grad;
  return semidual_value_and_grad(lambda, prob, grad, ops);
}

double semidual_component_value(Index i, ConstVecRef lambda, const EntropicProblem& prob) {
  const Index n = prob.size();
  check_index(i, n);
  const double eta = prob.eta();
  const double pi = prob.p()[i];
  Vector t;
  scaled_row(i, lambda, prob, t, nullptr);
  return static_cast<double>(n) * pi * (-prob.q().values().dot(lambda) - eta * std::log(pi) + eta * log_sum_exp(t));
}

Vector semidual_component_grad(Index i, ConstVecRef lambda, const EntropicProblem& prob, OpCounter* ops) {
  const Index n = prob.size();
  check_index(i, n);
  Vector g;
  softmax_row(i, lambda, prob, g, ops);
  const double scale = static_cast<double>(n) * prob.p()[i];
  g = scale * (g - prob.q().values());
  ops::add(ops, n);
  ops::mul(ops, n + 1);
  return g;
}

Vector semidual_full_grad(ConstVecRef lambda, const EntropicProblem& prob, OpCounter* ops) {
  Vector grad;
  semidual_value_and_grad(lambda, prob, grad, ops);
  return grad;
}

double semidual_value_and_grad(ConstVecRef lambda, const EntropicProblem& prob, Vector& grad, OpCounter* ops) {
  const Index n = prob.size();
  const auto un = static_cast<std::uint64_t>(n);
  const double eta = prob.eta();
  const Vector& p = prob.p().values();
  const Vector& q = prob.q().values();

  grad = -q;
  double lse_sum = 0.0;
  double plogp = 0.0;
  Vector t;
  for (Index i = 0; i < n; ++i) {
    scaled_row(i, lambda, prob, t, ops);
    const auto [m, s] = shifted_exp(t, ops);
    lse_sum += p[i] * (m + std::log(s));
    plogp += p[i] * std::log(p[i]);
    grad += (p[i] / s) * t;
    ops::log(ops, 2);
    ops::add(ops, 3 + un);
    ops::mul(ops, 2 + un);
    ops::div(ops, 1);
  }
  ops::mul(ops, un + 2);
  ops::add(ops, un + 2);
  return -q.dot(lambda) - eta * plogp + eta * lse_sum;
}

Matrix primal_from_dual(ConstVecRef lambda, const EntropicProblem& prob, OpCounter* ops) {
  const Index n = prob.size();
  Matrix x(n, n);
  Vector t;
  for (Index i = 0; i < n; ++i) {
    scaled_row(i, lambda, prob, t, ops);
    const auto [m, s] = shifted_exp(t, ops);
    (void)m;
    x.row(i) = (prob.p()[i] / s) * t.transpose();
    ops::div(ops, 1);
    ops::mul(ops, static_cast<std::uint64_t>(n));
  }
  return x;
}

SmoothnessProfile smoothness_constants(const EntropicProblem& prob, NormKind norm_kind) {
  const double n = static_cast<double>(prob.size());
  const double factor = norm_kind == NormKind::LInf ? 5.0 : 1.0;
  SmoothnessProfile profile;
  profile.norm_kind = norm_kind;
  profile.per_component = (factor * n / prob.eta()) * prob.p().values();
  profile.mean = profile.per_component.sum() / n;
  return profile;
}

}  // namespace eot
