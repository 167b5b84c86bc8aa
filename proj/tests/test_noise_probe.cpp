#include <doctest.h>

#include <cmath>
#include <numbers>

#include "arcma/noise_probe.hpp"

using namespace arcma;

TEST_SUITE("noise_probe") {

TEST_CASE("zero-noise oracle yields exactly zero spread") {
  auto fn = make_function(FunctionId::Sphere, 3);
  NoisyOracle oracle(fn, 0.0, 1000, Rng(1));
  const auto obs = sample_std(oracle, Vector::Ones(3), 8, 10);
  CHECK(obs.s == 0.0);
  CHECK(obs.m == 8);
  CHECK(oracle.budget_used() == 80);
}

TEST_CASE("m = 1 is rejected") {
  auto fn = make_function(FunctionId::Sphere, 2);
  NoisyOracle oracle(fn, 1.0, 100, Rng(1));
  CHECK_THROWS_AS(sample_std(oracle, Vector::Zero(2), 1, 5), std::invalid_argument);
}

TEST_CASE("small-sample std matches its known expectation at m = 2") {
  // E[s] = tau sqrt(2/pi) for two normal draws
  auto fn = make_function(FunctionId::Sphere, 2);
  NoisyOracle oracle(fn, 1.0, 30000, Rng(5));
  const auto obs = sample_std(oracle, Vector::Zero(2), 2, 10000);
  const double expected = std::sqrt(2.0 / std::numbers::pi);
  CHECK(obs.s == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("exact synthetic fit under the printed 1/sqrt(m) law") {
  const std::vector<StdObservation> obs = {{1, 1.0, 1}, {4, 0.5, 1}, {16, 0.25, 1}};
  CHECK(estimate_tau(obs, TauReading::Literal) == doctest::Approx(1.0));
}

TEST_CASE("all-zero observations declare a noiseless oracle") {
  const std::vector<StdObservation> obs = {{8, 0.0, 4}, {16, 0.0, 2}};
  CHECK(estimate_tau(obs) == 0.0);
}

TEST_CASE("estimate_tau input validation") {
  CHECK_THROWS_AS(estimate_tau({{8, 1.0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_tau({{8, 1.0, 1}, {8, 1.1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_tau({{8, -1.0, 1}, {16, 1.0, 1}}), std::invalid_argument);
}

TEST_CASE("probe calibration: tau_hat lands in [0.9, 1.1] almost always") {
  auto fn = make_function(FunctionId::Sphere, 10);
  int hits = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    NoisyOracle oracle(fn, 1.0, 10000, make_rng(9000 + t, 0));
    Rng probe_rng = make_rng(9000 + t, 2);
    ProbeConfig cfg;
    cfg.budget_fraction = 1.0;  // the whole 1e4 budget is the probe budget
    const auto result = run_noise_probe(oracle, fn.space, probe_rng, cfg);
    if (result.tau_hat >= 0.9 && result.tau_hat <= 1.1) ++hits;
  }
  CHECK(hits >= 95);
}

TEST_CASE("scale equivariance: 10x the noise gives 10x the estimate") {
  auto fn = make_function(FunctionId::Sphere, 5);
  for (int t = 0; t < 5; ++t) {
    NoisyOracle small(fn, 1.0, 20000, make_rng(100 + t, 0));
    NoisyOracle large(fn, 10.0, 20000, make_rng(100 + t, 0));  // matched draws
    Rng rng_a = make_rng(100 + t, 2), rng_b = make_rng(100 + t, 2);
    ProbeConfig cfg;
    cfg.budget_fraction = 0.5;
    const double tau_a = run_noise_probe(small, fn.space, rng_a, cfg).tau_hat;
    const double tau_b = run_noise_probe(large, fn.space, rng_b, cfg).tau_hat;
    CHECK(tau_b / tau_a == doctest::Approx(10.0).epsilon(0.10));
  }
}

TEST_CASE("probe spends within its budget share and charges the oracle") {
  auto fn = make_function(FunctionId::Sphere, 4);
  NoisyOracle oracle(fn, 1.0, 1000000, make_rng(77, 0));
  Rng rng = make_rng(77, 2);
  ProbeConfig cfg;  // default 0.1% fraction
  const auto result = run_noise_probe(oracle, fn.space, rng, cfg);
  CHECK(result.spent <= 1000);
  CHECK(result.spent == oracle.budget_used());
  CHECK(result.observations.size() >= 2);
}

TEST_CASE("tiny budgets degrade to a floor probe without failing") {
  auto fn = make_function(FunctionId::Sphere, 4);
  NoisyOracle oracle(fn, 1.0, 10000, make_rng(78, 0));
  Rng rng = make_rng(78, 2);
  const auto result = run_noise_probe(oracle, fn.space, rng);  // 0.1% of 1e4 = 10 < floor 120
  CHECK(result.spent <= 120);
  CHECK(result.observations.size() >= 2);
  CHECK(result.tau_hat > 0.0);
}

}  // TEST_SUITE
