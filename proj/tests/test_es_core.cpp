#include <doctest.h>

#include <cmath>

#include "arcma/es_core.hpp"

using namespace arcma;

namespace {

SearchSpace cube(double lo, double hi, int d) {
  SearchSpace space;
  space.lower = Vector::Constant(d, lo);
  space.upper = Vector::Constant(d, hi);
  return space;
}

Matrix random_spd(int d, Rng& rng, Vector* eigenvalues = nullptr) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix raw(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) raw(i, j) = normal(rng);
  const Eigen::HouseholderQR<Matrix> qr(raw);
  const Matrix q = qr.householderQ();
  Vector evals(d);
  std::uniform_real_distribution<double> unit(0.2, 4.0);
  for (int i = 0; i < d; ++i) evals[i] = unit(rng);
  if (eigenvalues) *eigenvalues = evals;
  return q * evals.asDiagonal() * q.transpose();
}

}  // namespace

TEST_SUITE("es_core") {

TEST_CASE("init_state applies the step-size rule and sane defaults") {
  CHECK(init_state(cube(-5, 5, 10), 20, 10, 1).sigma == doctest::Approx(1.0));
  CHECK(init_state(cube(-1, 1, 10), 20, 10, 1).sigma == doctest::Approx(0.2));
  CHECK(init_state(cube(-400, 400, 20), 20, 10, 1).sigma == doctest::Approx(80.0));

  const auto state = init_state(cube(-5, 5, 4), 12, 6, 7);
  CHECK(state.cov.isApprox(Matrix::Identity(4, 4)));
  CHECK(state.path_sigma.norm() == 0.0);
  CHECK(state.path_cov.norm() == 0.0);
  CHECK(state.iteration == 0);
  for (int i = 0; i < 4; ++i) {
    CHECK(state.mean[i] >= -5.0);
    CHECK(state.mean[i] <= 5.0);
  }
}

TEST_CASE("init_state rejects degenerate arguments") {
  CHECK_THROWS_AS(init_state(cube(1, 1, 3), 10, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(init_state(cube(-1, 1, 3), 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(init_state(cube(-1, 1, 3), 10, 11, 1), std::invalid_argument);
}

TEST_CASE("sampled candidates satisfy x = m + C^{1/2} eps") {
  Rng gen(5);
  auto state = init_state(cube(-2, 2, 6), 30, 15, 9);
  state.cov = random_spd(6, gen);
  state.sqrt_cov = Matrix::Identity(6, 6);  // force refresh through adapt path
  Eigen::SelfAdjointEigenSolver<Matrix> eig(state.cov);
  state.sqrt_cov = eig.operatorSqrt();
  auto pop = sample_population(state);
  REQUIRE(pop.size() == 30);
  for (const auto& cand : pop) {
    const Vector reconstructed = state.mean + state.sqrt_cov * cand.eps;
    CHECK((cand.x - reconstructed).norm() <= 1e-10 * std::max(1.0, cand.x.norm()));
  }
}

TEST_CASE("identical seeds sample identical populations") {
  auto a = init_state(cube(-3, 3, 5), 16, 8, 123);
  auto b = init_state(cube(-3, 3, 5), 16, 8, 123);
  const auto pa = sample_population(a);
  const auto pb = sample_population(b);
  for (size_t i = 0; i < pa.size(); ++i) CHECK(pa[i].x == pb[i].x);
}

TEST_CASE("sampling statistics: mean, coordinate variance, eps norm") {
  auto state = init_state(cube(-1, 1, 2), 100, 50, 3);
  state.mean = Vector::Zero(2);
  state.sigma = 1.0;
  state.cov = Vector(Vector::Zero(2)).asDiagonal();
  state.cov(0, 0) = 4.0;
  state.cov(1, 1) = 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(state.cov);
  state.sqrt_cov = eig.operatorSqrt();

  const int rounds = 1000;  // 1000 * lambda = 1e5 samples
  double sum0 = 0.0, sum_sq0 = 0.0;
  for (int r = 0; r < rounds; ++r)
    for (const auto& cand : sample_population(state)) {
      sum0 += cand.x[0];
      sum_sq0 += cand.x[0] * cand.x[0];
    }
  const double n = 1e5;
  CHECK(std::abs(sum0 / n) <= 3.0 * 2.0 / std::sqrt(n));
  const double var0 = sum_sq0 / n - (sum0 / n) * (sum0 / n);
  CHECK(var0 == doctest::Approx(4.0).epsilon(0.05));

  // ||eps||^2 under sigma = 0.5 follows 0.25 * chi^2_d
  state.sigma = 0.5;
  double eps_sq = 0.0;
  for (int r = 0; r < rounds; ++r)
    for (const auto& cand : sample_population(state)) eps_sq += cand.eps.squaredNorm();
  const double expected = 0.25 * 2.0;
  const double se = 0.25 * std::sqrt(2.0 * 2.0 / n);
  CHECK(std::abs(eps_sq / n - expected) <= 3.0 * se);
}

TEST_CASE("recombine_mean: zero weights leave the mean, identity case moves it") {
  auto state = init_state(cube(-1, 1, 3), 2, 1, 4);
  const Vector before = state.mean;
  auto pop = sample_population(state);
  recombine_mean(state, Vector::Zero(2), pop);
  CHECK(state.mean == before);

  auto single = init_state(cube(-1, 1, 3), 2, 1, 5);
  const Vector start = single.mean;
  auto pop2 = sample_population(single);
  Vector w(2);
  w << 1.0, 0.0;
  recombine_mean(single, w, pop2);
  CHECK((single.mean - (start + pop2[0].eps)).norm() <= 1e-12);

  Vector bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(recombine_mean(single, bad, pop2), std::invalid_argument);
}

TEST_CASE("proportional recombination descends on a linear function") {
  // tau = 0, C = I, small sigma: the weighted displacement should have
  // negative inner product with the gradient almost always
  const int d = 10, lambda = 20;
  int descents = 0;
  const int trials = 1000;
  Rng rng(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    Vector grad(d);
    for (int i = 0; i < d; ++i) grad[i] = normal(rng);
    Matrix eps(lambda, d);
    for (int i = 0; i < lambda; ++i)
      for (int j = 0; j < d; ++j) eps(i, j) = 0.01 * normal(rng);
    Vector deltas = -eps * grad;  // L(x) - L(m) = <g, eps> exactly on a line
    const double offset = -deltas.minCoeff();
    Vector shifted = deltas.array() + offset;
    Vector w = shifted.sum() > 0 ? Vector(shifted / shifted.sum())
                                 : Vector(Vector::Constant(lambda, 1.0 / lambda));
    const Vector step = eps.transpose() * w;
    if (step.dot(grad) < 0.0) ++descents;
  }
  CHECK(descents >= 950);
}

TEST_CASE("adapt with zero weights decays both paths") {
  auto state = init_state(cube(-1, 1, 4), 8, 4, 11);
  auto pop = sample_population(state);
  state.path_sigma = Vector::Ones(4);
  state.path_cov = Vector::Ones(4) * 0.5;
  const CmaConstants k = cma_constants(4, 1.0);  // zero weights fall back to mu_eff = 1
  const double sigma_before = state.sigma;
  adapt(state, Vector::Zero(8), pop);
  const CmaConstants kd = cma_constants(4, state.default_mu_eff);
  CHECK(state.path_sigma.isApprox(Vector::Ones(4) * (1.0 - kd.c_sigma), 1e-12));
  CHECK(state.path_cov.isApprox(Vector::Ones(4) * 0.5 * (1.0 - kd.c_c), 1e-12));
  CHECK(state.iteration == 1);
  CHECK(state.sigma > 0.0);
  CHECK(state.sigma < sigma_before);  // decayed path is shorter than chi_d
  (void)k;
}

TEST_CASE("adapt keeps the covariance symmetric positive definite") {
  auto state = init_state(cube(-5, 5, 6), 12, 6, 21);
  for (int it = 0; it < 50; ++it) {
    auto pop = sample_population(state);
    for (size_t i = 0; i < pop.size(); ++i)
      pop[i].mean_value = pop[i].x.squaredNorm();  // rank on the sphere
    const Vector w = ranked_recombination_weights(pop, state.mu);
    recombine_mean(state, w, pop);
    adapt(state, w, pop);

    const double scale = state.cov.cwiseAbs().maxCoeff();
    CHECK((state.cov - state.cov.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(state.cov, Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    CHECK(eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff() <= 1e14);
    CHECK(std::isfinite(state.sigma));
    CHECK(state.sigma > 0.0);
  }
}

TEST_CASE("noiseless sphere run converges (sigma collapses, error small)") {
  const int d = 10, lambda = 20;
  auto state = init_state(cube(-5, 5, d), lambda, lambda / 2, 3001);
  const double sigma0 = state.sigma;
  for (int it = 0; it < 200; ++it) {
    auto pop = sample_population(state);
    for (auto& cand : pop) cand.mean_value = cand.x.squaredNorm();
    const Vector w = ranked_recombination_weights(pop, state.mu);
    recombine_mean(state, w, pop);
    adapt(state, w, pop);
  }
  CHECK(state.sigma <= sigma0 * 1e-2);
  CHECK(state.mean.squaredNorm() <= 1e-2);
}

TEST_CASE("median error over 10 seeds on sphere with 1e4 evaluations") {
  const int d = 10, lambda = 20;
  std::vector<double> errors;
  for (int seed = 0; seed < 10; ++seed) {
    auto state = init_state(cube(-5, 5, d), lambda, lambda / 2, 4000 + seed);
    const int iterations = 10000 / lambda;
    for (int it = 0; it < iterations; ++it) {
      auto pop = sample_population(state);
      for (auto& cand : pop) cand.mean_value = cand.x.squaredNorm();
      const Vector w = ranked_recombination_weights(pop, state.mu);
      recombine_mean(state, w, pop);
      adapt(state, w, pop);
    }
    errors.push_back(state.mean.squaredNorm());
  }
  std::sort(errors.begin(), errors.end());
  CHECK(0.5 * (errors[4] + errors[5]) <= 1e-3);
}

TEST_CASE("largest_eigenvalue agrees with constructed spectra") {
  CHECK(largest_eigenvalue(Matrix::Identity(10, 10)) == doctest::Approx(1.0));
  Vector diag(3);
  diag << 3.0, 1.0, 0.5;
  CHECK(largest_eigenvalue(Matrix(diag.asDiagonal())) == doctest::Approx(3.0));

  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Vector evals;
    const Matrix a = random_spd(7, rng, &evals);
    CHECK(largest_eigenvalue(a) == doctest::Approx(evals.maxCoeff()).epsilon(1e-8));
  }

  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(largest_eigenvalue(asym), std::invalid_argument);
}

TEST_CASE("ranked weights: top-mu, sum one, ties broken by index") {
  std::vector<Candidate> pop(4);
  pop[0].mean_value = 3.0;
  pop[1].mean_value = 1.0;
  pop[2].mean_value = 1.0;
  pop[3].mean_value = 2.0;
  const Vector w = ranked_recombination_weights(pop, 2);
  CHECK(w.sum() == doctest::Approx(1.0));
  CHECK(w[0] == 0.0);            // worst candidate excluded
  CHECK(w[3] == 0.0);            // third place excluded at mu = 2
  CHECK(w[1] > w[2]);            // tie: lower index ranks first
  CHECK(w.minCoeff() >= 0.0);
}

}  // TEST_SUITE
