#include "doctest.h"

#include "eot/core.hpp"
#include "eot/rounding.hpp"
#include "eot/semidual.hpp"
#include "test_util.hpp"

#include <cmath>
#include <functional>

using namespace eot;
using eot::testing::mat;
using eot::testing::vec;

namespace {

EntropicProblem zero_cost_problem(const Vector& p, const Vector& q, double eta) {
  const Index n = p.size();
  return EntropicProblem(CostMatrix(Matrix::Zero(n, n)), SimplexVector(p), SimplexVector(q), eta);
}

Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Index k = 0; k < x.size(); ++k) {
    Vector a = x, b = x;
    a[k] += h;
    b[k] -= h;
    g[k] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("tau_of_lambda") {
  const auto prob = zero_cost_problem(vec({0.5, 0.5}), vec({0.5, 0.5}), 1.0);
  const Vector tau = tau_of_lambda(Vector::Zero(2), prob);
  CHECK(tau[0] == doctest::Approx(1.0 - 2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(tau[1] == doctest::Approx(-0.3862944).epsilon(1e-6));

  Rng rng(1);
  const auto rp = testing::random_problem(5, rng, 0.3);
  const Vector lam = testing::random_vector(5, rng, -2.0, 2.0);
  const Vector shifted = tau_of_lambda(lam.array() + 1.7, rp);
  CHECK((shifted - (tau_of_lambda(lam, rp).array() - 1.7).matrix()).lpNorm<Eigen::Infinity>() <= 1e-12);

  const Vector huge = vec({1e6, -1e6, 1e6, -1e6, 0.0});
  CHECK(tau_of_lambda(huge, rp).allFinite());
}

TEST_CASE("semidual_value") {
  const auto prob = zero_cost_problem(vec({0.5, 0.5}), vec({0.5, 0.5}), 1.0);
  CHECK(semidual_value(Vector::Zero(2), prob) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  // The uniform plan is optimal here and f(x*) = -phi(lambda*).
  const Matrix uniform = Matrix::Constant(2, 2, 0.25);
  CHECK(entropic_objective(prob.cost(), uniform, 1.0) == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-12));

  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(8));
    const auto rp = testing::random_problem(n, rng, rng.uniform(0.05, 2.0));
    const Vector lam = testing::random_vector(n, rng, -3.0, 3.0);
    double avg = 0.0;
    for (Index i = 0; i < n; ++i) avg += semidual_component_value(i, lam, rp);
    avg /= static_cast<double>(n);
    CHECK(std::abs(avg - semidual_value(lam, rp)) <= 1e-10 * std::max(1.0, std::abs(avg)));
  }
}

TEST_CASE("weak duality against feasible plans") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(6));
    const auto rp = testing::random_problem(n, rng, rng.uniform(0.05, 1.0));
    Matrix x = testing::random_matrix(n, rng, 0.0, 1.0);
    x /= x.sum();
    const Matrix feasible = round_to_feasible(x, rp.p().values(), rp.q().values());
    const Vector lam = testing::random_vector(n, rng, -3.0, 3.0);
    CHECK(semidual_value(lam, rp) >= -entropic_objective(rp.cost(), feasible, rp.eta()) - 1e-10);
  }
}

TEST_CASE("semidual_component_grad") {
  const auto prob = zero_cost_problem(vec({0.3, 0.7}), vec({0.5, 0.5}), 1.0);
  const Vector g = semidual_component_grad(0, Vector::Zero(2), prob);
  CHECK(g.lpNorm<Eigen::Infinity>() <= 1e-15);
  CHECK_THROWS_AS(semidual_component_grad(2, Vector::Zero(2), prob), Error);
  CHECK_THROWS_AS(semidual_component_grad(-1, Vector::Zero(2), prob), Error);

  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(8));
    const auto rp = testing::random_problem(n, rng, rng.uniform(0.05, 2.0));
    const Vector lam = testing::random_vector(n, rng, -3.0, 3.0);
    Vector avg = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) avg += semidual_component_grad(i, lam, rp);
    avg /= static_cast<double>(n);
    CHECK((avg - semidual_full_grad(lam, rp)).lpNorm<Eigen::Infinity>() <= 1e-12);

    const Index i = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
    const Vector gi = semidual_component_grad(i, lam, rp);
    const Vector fd = central_difference([&](const Vector& l) { return semidual_component_value(i, l, rp); }, lam, 1e-5);
    CHECK((fd - gi).lpNorm<Eigen::Infinity>() <= 1e-5 * std::max(gi.lpNorm<Eigen::Infinity>(), 1e-3));
  }
}

TEST_CASE("semidual_full_grad") {
  for (double eta : {0.1, 1.0, 7.0}) {
    const auto prob = zero_cost_problem(vec({0.5, 0.5}), vec({0.3, 0.7}), eta);
    const Vector g = semidual_full_grad(Vector::Zero(2), prob);
    CHECK(g[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(-0.2).epsilon(1e-12));
  }
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(8));
    const auto rp = testing::random_problem(n, rng, rng.uniform(0.05, 2.0));
    const Vector lam = testing::random_vector(n, rng, -3.0, 3.0);
    const Vector mix = semidual_full_grad(lam, rp) + rp.q().values();
    CHECK(std::abs(mix.sum() - 1.0) <= 1e-12);
    CHECK(mix.minCoeff() >= 0.0);
    Vector g2;
    const double v = semidual_value_and_grad(lam, rp, g2);
    CHECK(v == semidual_value(lam, rp));
    CHECK((g2 - semidual_full_grad(lam, rp)).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("gradient matches central differences") {
  Rng rng(6);
  for (Index n : {2, 5, 10}) {
    for (int trial = 0; trial < 70; ++trial) {
      const double cmax = rng.uniform(0.5, 3.0);
      const auto rp = testing::random_problem(n, rng, rng.uniform(0.2, 2.0), cmax);
      const double cinf = rp.cost().max_abs();
      const Vector lam = testing::random_vector(n, rng, -3.0 * cinf, 3.0 * cinf);
      const Vector g = semidual_full_grad(lam, rp);
      const Vector fd = central_difference([&](const Vector& l) { return semidual_value(l, rp); }, lam, 1e-5);
      CHECK((fd - g).lpNorm<Eigen::Infinity>() <= 1e-5 * g.lpNorm<Eigen::Infinity>());
    }
  }
}

TEST_CASE("primal_from_dual") {
  const auto prob = zero_cost_problem(vec({0.3, 0.7}), vec({0.5, 0.5}), 0.4);
  const Matrix x = primal_from_dual(Vector::Zero(2), prob);
  CHECK((x - mat({{0.15, 0.15}, {0.35, 0.35}})).lpNorm<Eigen::Infinity>() <= 1e-15);

  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(8));
    const auto rp = testing::random_problem(n, rng, rng.uniform(0.05, 2.0), rng.uniform(0.1, 5.0));
    const Vector lam = testing::random_vector(n, rng, -5.0, 5.0);
    const Matrix xl = primal_from_dual(lam, rp);
    CHECK((xl.rowwise().sum() - rp.p().values()).lpNorm<Eigen::Infinity>() <= 1e-12);
    const Vector col_gap = xl.colwise().sum().transpose() - rp.q().values();
    CHECK((col_gap - semidual_full_grad(lam, rp)).lpNorm<Eigen::Infinity>() <= 1e-10);
    // Residual of the primal equals the l1 norm of the gradient.
    CHECK(std::abs(marginal_residual(xl, rp.p().values(), rp.q().values()) - semidual_full_grad(lam, rp).lpNorm<1>()) <=
          1e-10);
  }
}

TEST_CASE("smoothness_constants") {
  const auto prob = zero_cost_problem(vec({0.5, 0.5}), vec({0.5, 0.5}), 0.1);
  const auto linf = smoothness_constants(prob, NormKind::LInf);
  CHECK(linf.per_component[0] == doctest::Approx(50.0));
  CHECK(linf.per_component[1] == doctest::Approx(50.0));
  CHECK(linf.mean == doctest::Approx(50.0));
  const auto l2 = smoothness_constants(prob, NormKind::L2);
  CHECK(l2.per_component[0] == doctest::Approx(10.0));
  CHECK(l2.mean == doctest::Approx(10.0));

  Rng rng(8);
  const auto rp = testing::random_problem(7, rng, 0.3);
  for (NormKind k : {NormKind::L2, NormKind::LInf}) {
    const auto prof = smoothness_constants(rp, k);
    for (Index i = 0; i < 7; ++i) CHECK(prof.sampling_weight(i) == doctest::Approx(rp.p()[i]).epsilon(1e-12));
  }
}

TEST_CASE("component gradients are Lipschitz in both geometries") {
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(8));
    const auto rp = testing::random_problem(n, rng, rng.uniform(0.05, 2.0), rng.uniform(0.1, 3.0));
    const Vector a = testing::random_vector(n, rng, -3.0, 3.0);
    const Vector b = a + testing::random_vector(n, rng, -1.0, 1.0) * rng.uniform(0.0, 2.0);
    const Index i = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
    const Vector d = semidual_component_grad(i, a, rp) - semidual_component_grad(i, b, rp);
    const double scale = static_cast<double>(n) * rp.p()[i] / rp.eta();
    CHECK(d.lpNorm<1>() <= 5.0 * scale * (a - b).lpNorm<Eigen::Infinity>() * (1 + 1e-12) + 1e-14);
    CHECK(d.norm() <= scale * (a - b).norm() * (1 + 1e-12) + 1e-14);
  }
}

TEST_CASE("normalized reweighting is 5-Lipschitz in the exponent") {
  Rng rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.index(10));
    const Vector a = testing::random_vector(n, rng, 1e-3, 1.0);
    const Vector b = testing::random_vector(n, rng, -1.0, 1.0) * rng.uniform(0.0, 3.0);
    const Vector ab = a.array() * b.array().exp();
    const double lhs = (a / a.sum() - ab / ab.sum()).lpNorm<1>();
    CHECK(lhs <= 5.0 * b.lpNorm<Eigen::Infinity>() + 1e-15);
  }
}

TEST_CASE("semidual is translation invariant and convex") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(8));
    const auto rp = testing::random_problem(n, rng, rng.uniform(0.05, 2.0));
    const Vector a = testing::random_vector(n, rng, -3.0, 3.0);
    const Vector b = testing::random_vector(n, rng, -3.0, 3.0);
    const double c = rng.uniform(-10.0, 10.0);
    CHECK(std::abs(semidual_value(a.array() + c, rp) - semidual_value(a, rp)) <= 1e-10 * std::max(1.0, std::abs(c)));
    CHECK(semidual_value(0.5 * (a + b), rp) <= 0.5 * (semidual_value(a, rp) + semidual_value(b, rp)) + 1e-10);
  }
}
