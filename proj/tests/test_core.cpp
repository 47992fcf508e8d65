#include "doctest.h"

#include "eot/core.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace eot;
using eot::testing::mat;
using eot::testing::vec;

TEST_CASE("validate_simplex accepts and rejects") {
  CHECK_NOTHROW(validate_simplex(vec({0.5, 0.5})));
  try {
    validate_simplex(vec({0.3, 0.7000000002}));
    FAIL("expected SumNotOne");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SumNotOne);
  }
  try {
    validate_simplex(vec({-0.1, 1.1}));
    FAIL("expected NegativeEntry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeEntry);
  }
  // No silent renormalization.
  const SimplexVector s = validate_simplex(vec({0.25, 0.75}));
  CHECK(s[0] == 0.25);
}

TEST_CASE("entropy of simple plans") {
  CHECK(entropy(TransportPlan(Matrix::Constant(2, 2, 0.25))) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(entropy(TransportPlan(mat({{1, 0}, {0, 0}}))) == 0.0);
  Eigen::RowVector2d half(0.5, 0.5);
  CHECK(entropy(half) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("transport_cost") {
  const CostMatrix c(mat({{0, 1}, {1, 0}}));
  CHECK(transport_cost(c, TransportPlan(mat({{0.5, 0}, {0, 0.5}}))) == 0.0);
  CHECK(transport_cost(CostMatrix(Matrix::Ones(2, 2)), TransportPlan(mat({{0.1, 0.2}, {0.3, 0.4}}))) ==
        doctest::Approx(1.0).epsilon(1e-15));
  // Direct summation: 0*0.3 + 1*0 + 1*0.2 + 0*0.5.
  CHECK(transport_cost(c, TransportPlan(mat({{0.3, 0}, {0.2, 0.5}}))) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(transport_cost(c, TransportPlan(Matrix::Zero(3, 3))), Error);
}

TEST_CASE("marginal_residual") {
  const SimplexVector half(vec({0.5, 0.5}));
  CHECK(marginal_residual(TransportPlan(mat({{0.25, 0.25}, {0.25, 0.25}})), half, half) <= 1e-12);
  const SimplexVector p(vec({0.2, 0.8})), q(vec({0.6, 0.4}));
  CHECK(marginal_residual(TransportPlan(Matrix::Zero(2, 2)), p, q) == doctest::Approx(2.0));
  // rows (0.5, 0.3) vs 0.5: 0.2; cols (0.5, 0.3) vs 0.5: 0.2.
  CHECK(marginal_residual(TransportPlan(mat({{0.5, 0}, {0, 0.3}})), half, half) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK_THROWS_AS(marginal_residual(TransportPlan(Matrix::Zero(3, 3)), half, half), Error);
}

TEST_CASE("derive_params") {
  const CostMatrix c(mat({{0, 2, 1, 0}, {1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}));
  const ApproxParams a = derive_params(0.4, c, 4);
  CHECK(a.eta == doctest::Approx(0.4 / (4.0 * std::log(4.0))).epsilon(1e-15));
  CHECK(a.eta == doctest::Approx(0.0721348).epsilon(1e-6));
  CHECK(a.eps_prime == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(derive_params(16.0, c, 4).eps_prime == 1.0);

  try {
    derive_params(0.1, CostMatrix(Matrix::Ones(1, 1)), 1);
    FAIL("expected TooSmallProblem");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooSmallProblem);
  }
  try {
    derive_params(0.1, CostMatrix(Matrix::Zero(3, 3)), 3);
    FAIL("expected ZeroCost");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroCost);
  }
}

TEST_CASE("smooth_marginals examples") {
  const SimplexVector p(vec({1.0, 0.0}));
  const auto [ps, qs] = smooth_marginals(p, p, 0.2);
  CHECK(ps[0] == doctest::Approx(0.9875).epsilon(1e-15));
  CHECK(ps[1] == doctest::Approx(0.0125).epsilon(1e-15));
  CHECK(qs.min_entry() == doctest::Approx(0.2 / 16.0).epsilon(1e-14));

  const SimplexVector u(Vector::Constant(5, 0.2));
  const auto [us, unused] = smooth_marginals(u, u, 0.3);
  CHECK((us.values() - u.values()).lpNorm<Eigen::Infinity>() <= 1e-15);

  CHECK_THROWS_AS(smooth_marginals(p, p, 0.0), Error);
  CHECK_THROWS_AS(smooth_marginals(p, p, 8.0), Error);
}

TEST_CASE("smooth_marginals properties on random inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(30));
    const SimplexVector p = testing::random_sparse_simplex(n, rng);
    const SimplexVector q = testing::random_sparse_simplex(n, rng);
    const double eps_prime = rng.uniform(1e-4, 2.0);
    const auto [ps, qs] = smooth_marginals(p, q, eps_prime);
    CHECK(std::abs(ps.values().sum() - 1.0) <= 1e-12);
    CHECK(std::abs(qs.values().sum() - 1.0) <= 1e-12);
    CHECK(ps.min_entry() > 0.0);
    CHECK(qs.min_entry() > 0.0);
    CHECK(ps.min_entry() >= eps_prime / (8.0 * n) * (1 - 1e-9));
    // Each marginal moves by (eps'/8) |p - 1/n|_1 < eps'/4.
    CHECK((p.values() - ps.values()).lpNorm<1>() <= eps_prime / 4.0 + 1e-12);
    CHECK((q.values() - qs.values()).lpNorm<1>() <= eps_prime / 4.0 + 1e-12);
  }
}

TEST_CASE("smoothing displacement of point masses") {
  // Two point masses on n = 50 move by eps'/8 * 2(1 - 1/n) each, so the
  // combined displacement exceeds eps'/4 while each one stays below it.
  const Index n = 50;
  Vector e = Vector::Zero(n);
  e[0] = 1.0;
  const SimplexVector p(e);
  const double eps_prime = 0.4;
  const auto [ps, qs] = smooth_marginals(p, p, eps_prime);
  const double each = (p.values() - ps.values()).lpNorm<1>();
  CHECK(each == doctest::Approx(eps_prime / 8.0 * 2.0 * (1.0 - 1.0 / n)).epsilon(1e-12));
  CHECK(each < eps_prime / 4.0);
  CHECK(2.0 * each > eps_prime / 4.0);
}

TEST_CASE("entropy is maximal at the uniform plan") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(8));
    Matrix x = testing::random_matrix(n, rng, 0.0, 1.0);
    x /= x.sum();
    CHECK(entropy(x) <= 2.0 * std::log(static_cast<double>(n)) + 1e-9);
  }
  const Index n = 5;
  CHECK(entropy(Matrix::Constant(n, n, 1.0 / (n * n))) == doctest::Approx(2.0 * std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("transport_cost is linear in the plan") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(6));
    const CostMatrix c(testing::random_matrix(n, rng, 0.0, 5.0));
    const Matrix x = testing::random_matrix(n, rng, 0.0, 0.1);
    const Matrix y = testing::random_matrix(n, rng, 0.0, 0.1);
    const double a = rng.uniform(0.0, 2.0), b = rng.uniform(0.0, 2.0);
    const double lhs = transport_cost(c, TransportPlan(a * x + b * y));
    const double rhs = a * transport_cost(c, TransportPlan(x)) + b * transport_cost(c, TransportPlan(y));
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("log_sum_exp is stable and counts operations") {
  OpCounter ops;
  const Vector big = vec({1e6, 1e6 - 1.0, -1e6});
  CHECK(log_sum_exp(big, &ops) == doctest::Approx(1e6 + std::log(1.0 + std::exp(-1.0))));
  CHECK(ops.exps == 3);
  CHECK(ops.logs == 1);
  CHECK(ops.total() == ops.adds + ops.muls + ops.divs + ops.exps + ops.logs + ops.compares);
}
