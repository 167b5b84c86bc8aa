#pragma once

#include <vector>

#include "arcma/benchmarks.hpp"
#include "arcma/types.hpp"

namespace arcma {

/// One probe observation: `repeats` batches of `m` noisy draws at a fixed
/// point; s averages each batch's unbiased sample standard deviation.
struct StdObservation {
  int m = 0;
  double s = 0.0;
  int repeats = 0;
};

/// How the observations map onto the fitted 1/sqrt(M) law. The raw sample
/// standard deviation of the draws has expectation ~tau regardless of M; the
/// quantity that actually follows tau/sqrt(M) is the standard error of the
/// M-sample mean. Consistent fits the standard-error transform s/sqrt(m);
/// Literal fits the raw s against tau/sqrt(m) as printed and grossly
/// overestimates tau on real data. Default Consistent.
enum class TauReading { Consistent, Literal };

/// Draws `repeats` batches of m samples at x. Charges m * repeats.
StdObservation sample_std(NoisyOracle& oracle, const Vector& x, int m, int repeats);

/// Single-parameter least-squares fit of tau over the observations.
/// All-zero observations declare the oracle noiseless (tau = 0).
double estimate_tau(const std::vector<StdObservation>& observations,
                    TauReading reading = TauReading::Consistent);

struct ProbeConfig {
  double budget_fraction = 0.001;
  long long min_budget = 120;
  // batch sizes; small m is excluded because the std's small-sample bias
  // (E[s] = 0.80 tau at m = 2) is not corrected and would skew the fit
  std::vector<int> schedule = {8, 16, 32, 64};
  TauReading reading = TauReading::Consistent;
};

struct ProbeResult {
  double tau_hat = 0.0;
  long long spent = 0;
  std::vector<StdObservation> observations;
};

/// Pre-run noise-level estimation at a point drawn uniformly in the search
/// space. Spends at most the configured fraction of the total budget
/// (floored at min_budget), split evenly across batch sizes.
ProbeResult run_noise_probe(NoisyOracle& oracle, const SearchSpace& space, Rng& rng,
                            const ProbeConfig& config = {});

}  // namespace arcma
