#include <doctest.h>

#include <cmath>

#include "arcma/benchmarks.hpp"

using namespace arcma;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<long>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_SUITE("benchmarks") {

TEST_CASE("closed-form values at reference points") {
  CHECK(evaluate_true(FunctionId::Sphere, Vector::Zero(4)) == 0.0);
  CHECK(evaluate_true(FunctionId::Ellipsoid, vec({1.0, 1.0})) == doctest::Approx(101.0));
  CHECK(evaluate_true(FunctionId::CosineMixture, Vector::Zero(10)) == doctest::Approx(-1.0));
  CHECK(evaluate_true(FunctionId::NesterovF1, Vector::Ones(10)) == doctest::Approx(0.0));
  CHECK(evaluate_true(FunctionId::Sphere, vec({1.0, 0.0})) == doctest::Approx(1.0));
  // rotated ellipsoid puts the heavy coefficient on the first coordinate
  CHECK(evaluate_true(FunctionId::RotatedEllipsoid, vec({1.0, 0.0})) == doctest::Approx(100.0));
  CHECK(evaluate_true(FunctionId::HyperEllipsoid, vec({1.0, 1.0, 1.0})) == doctest::Approx(6.0));
  CHECK(evaluate_true(FunctionId::Schwefel02, vec({1.0, 1.0})) == doctest::Approx(5.0));
  CHECK(evaluate_true(FunctionId::SumAbsolute, vec({-0.5, 0.25})) == doctest::Approx(0.75));
}

TEST_CASE("dimension mismatch is rejected") {
  const auto fn = make_function(FunctionId::Sphere, 3);
  CHECK_THROWS_AS(fn.evaluate_true(Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("optimum values") {
  CHECK(optimum_value(FunctionId::Sphere, 7) == 0.0);
  CHECK(optimum_value(FunctionId::CosineMixture, 20) == doctest::Approx(-2.0));
  CHECK(optimum_value(FunctionId::Trid, 20) == doctest::Approx(-1520.0));
  CHECK(optimum_value(FunctionId::Trid, 10) == doctest::Approx(-210.0));
}

TEST_CASE("every function hits its optimum at the tabulated minimizer") {
  for (int id = 0; id <= static_cast<int>(FunctionId::GriewankNonsmooth); ++id) {
    const auto fid = static_cast<FunctionId>(id);
    for (int d : {2, 5, 10, 20}) {
      const auto fn = make_function(fid, d);
      CHECK(std::abs(fn.evaluate_true(fn.minimizer) - fn.optimum_value) <= 1e-12);
    }
  }
}

TEST_CASE("search spaces match the tabulated bounds") {
  CHECK(make_function(FunctionId::Sphere, 3).space.upper[0] == 5.0);
  CHECK(make_function(FunctionId::Rastrigin, 3).space.lower[2] == -5.0);
  CHECK(make_function(FunctionId::Trid, 20).space.upper[0] == 400.0);
  CHECK(make_function(FunctionId::Bohachevsky, 4).space.upper[1] == 15.0);
  CHECK(make_function(FunctionId::Schwefel02, 4).space.lower[0] == -10.0);
  CHECK(make_function(FunctionId::CosineMixture, 4).space.upper[3] == 1.0);
  CHECK(make_function(FunctionId::GriewankNonsmooth, 4).space.lower[1] == -1.0);
}

TEST_CASE("symmetric functions are even") {
  Rng rng(99);
  std::normal_distribution<double> normal(0.0, 2.0);
  const FunctionId even_ids[] = {FunctionId::Sphere,
                                 FunctionId::Ellipsoid,
                                 FunctionId::RotatedEllipsoid,
                                 FunctionId::HyperEllipsoid,
                                 FunctionId::RotatedHyperEllipsoid,
                                 FunctionId::Rastrigin,
                                 FunctionId::CosineMixture,
                                 FunctionId::Bohachevsky,
                                 FunctionId::SumAbsolute};
  for (const auto id : even_ids) {
    for (int trial = 0; trial < 20; ++trial) {
      Vector x(6);
      for (int i = 0; i < 6; ++i) x[i] = normal(rng);
      CHECK(evaluate_true(id, x) == doctest::Approx(evaluate_true(id, -x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("function ids round-trip through their config names") {
  for (int id = 0; id <= static_cast<int>(FunctionId::GriewankNonsmooth); ++id) {
    const auto fid = static_cast<FunctionId>(id);
    CHECK(function_id_from_string(to_string(fid)) == fid);
  }
  CHECK_THROWS_AS(function_id_from_string("not_a_function"), std::invalid_argument);
}

TEST_CASE("cross-term functions need dimension >= 2") {
  CHECK_THROWS_AS(make_function(FunctionId::Trid, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_function(FunctionId::Bohachevsky, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_function(FunctionId::Schwefel02, 1), std::invalid_argument);
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(7);
  std::uniform_real_distribution<double> unit(-1.5, 1.5);
  const FunctionId smooth_ids[] = {FunctionId::Sphere,
                                   FunctionId::Ellipsoid,
                                   FunctionId::RotatedEllipsoid,
                                   FunctionId::HyperEllipsoid,
                                   FunctionId::RotatedHyperEllipsoid,
                                   FunctionId::Rastrigin,
                                   FunctionId::Trid,
                                   FunctionId::CosineMixture,
                                   FunctionId::Bohachevsky,
                                   FunctionId::Schwefel02};
  const int d = 6;
  const double h = 1e-6;
  for (const auto id : smooth_ids) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x[i] = unit(rng);
    const Vector grad = true_gradient(id, x);
    for (int i = 0; i < d; ++i) {
      Vector hi = x, lo = x;
      hi[i] += h;
      lo[i] -= h;
      const double fd = (evaluate_true(id, hi) - evaluate_true(id, lo)) / (2.0 * h);
      CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("gradient Lipschitz constants bound random secants") {
  Rng rng(13);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const FunctionId smooth_ids[] = {FunctionId::Sphere,    FunctionId::HyperEllipsoid,
                                   FunctionId::Rastrigin, FunctionId::Trid,
                                   FunctionId::Schwefel02, FunctionId::Bohachevsky};
  const int d = 5;
  for (const auto id : smooth_ids) {
    const double k = gradient_lipschitz_constant(id, d);
    for (int trial = 0; trial < 200; ++trial) {
      Vector x(d), y(d);
      for (int i = 0; i < d; ++i) {
        x[i] = unit(rng);
        y[i] = unit(rng);
      }
      const double lhs = (true_gradient(id, x) - true_gradient(id, y)).norm();
      CHECK(lhs <= k * (x - y).norm() * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("noisy oracle: zero noise is exact and budget is counted") {
  auto fn = make_function(FunctionId::Sphere, 2);
  NoisyOracle oracle(fn, 0.0, 100, Rng(1));
  CHECK(oracle.noisy_sample(vec({1.0, 0.0})) == 1.0);
  CHECK(oracle.budget_used() == 1);
  CHECK(oracle.mean_evaluate(vec({1.0, 1.0}), 7) == doctest::Approx(2.0));
  CHECK(oracle.budget_used() == 8);
}

TEST_CASE("noisy oracle: budget exhaustion is all-or-nothing") {
  auto fn = make_function(FunctionId::Sphere, 2);
  NoisyOracle oracle(fn, 1.0, 10, Rng(1));
  oracle.mean_evaluate(Vector::Zero(2), 8);
  CHECK_THROWS_AS(oracle.mean_evaluate(Vector::Zero(2), 3), BudgetExhausted);
  CHECK(oracle.budget_used() == 8);  // nothing charged by the failed call
  oracle.mean_evaluate(Vector::Zero(2), 2);
  CHECK(oracle.budget_used() == 10);
  CHECK_THROWS_AS(oracle.noisy_sample(Vector::Zero(2)), BudgetExhausted);
  CHECK_THROWS_AS(oracle.mean_evaluate(Vector::Zero(2), 0), std::invalid_argument);
}

TEST_CASE("noisy oracle: budget conservation over mixed call sequences") {
  auto fn = make_function(FunctionId::Sphere, 2);
  NoisyOracle oracle(fn, 0.5, 100000, Rng(3));
  Rng rng(17);
  std::uniform_int_distribution<int> pick(1, 40);
  long long expected = 0;
  for (int step = 0; step < 200; ++step) {
    if (step % 3 == 0) {
      oracle.noisy_sample(Vector::Zero(2));
      expected += 1;
    } else {
      const int m = pick(rng);
      oracle.mean_evaluate(Vector::Zero(2), m);
      expected += m;
    }
  }
  CHECK(oracle.budget_used() == expected);
}

TEST_CASE("noisy oracle: sample mean and variance match the noise model") {
  auto fn = make_function(FunctionId::Sphere, 2);
  const double tau = 2.0;
  const int n = 100000;
  NoisyOracle oracle(fn, tau, n + 10, Rng(11));
  const Vector x = vec({0.0, 0.0});
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = oracle.noisy_sample(x);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  CHECK(std::abs(mean - 0.0) <= 3.0 * tau / std::sqrt(static_cast<double>(n)));
  const double slack = 5.0 / std::sqrt(static_cast<double>(n));
  CHECK(var >= tau * tau * (1.0 - slack));
  CHECK(var <= tau * tau * (1.0 + slack));
}

TEST_CASE("mean_evaluate concentrates like a mean of M draws") {
  auto fn = make_function(FunctionId::Sphere, 2);
  const double tau = 1.0;
  const int m = 10000;
  int hits = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    NoisyOracle oracle(fn, tau, m, Rng(1000 + t));
    const double v = oracle.mean_evaluate(vec({1.0, 1.0}), m);
    if (std::abs(v - 2.0) <= 3.0 * tau / std::sqrt(static_cast<double>(m))) ++hits;
  }
  CHECK(hits >= 99);
}

TEST_CASE("same seed reproduces the same stream") {
  auto fn = make_function(FunctionId::Rastrigin, 3);
  NoisyOracle a(fn, 1.0, 100, Rng(42));
  NoisyOracle b(fn, 1.0, 100, Rng(42));
  for (int i = 0; i < 20; ++i) {
    const double va = a.noisy_sample(Vector::Ones(3));
    const double vb = b.noisy_sample(Vector::Ones(3));
    CHECK(va == vb);
  }
}

}  // TEST_SUITE
