#include "arcma/noise_probe.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace arcma {

StdObservation sample_std(NoisyOracle& oracle, const Vector& x, int m, int repeats) {
  if (m < 2) throw std::invalid_argument("sample_std: need m >= 2 for an unbiased std");
  if (repeats < 1) throw std::invalid_argument("sample_std: need repeats >= 1");
  if (static_cast<long long>(m) * repeats > oracle.remaining()) throw BudgetExhausted();

  double s_sum = 0.0;
  std::vector<double> batch(m);
  for (int r = 0; r < repeats; ++r) {
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      batch[i] = oracle.noisy_sample(x);
      sum += batch[i];
    }
    const double mean = sum / m;
    double ss = 0.0;
    for (int i = 0; i < m; ++i) ss += (batch[i] - mean) * (batch[i] - mean);
    s_sum += std::sqrt(ss / (m - 1));
  }
  return StdObservation{m, s_sum / repeats, repeats};
}

double estimate_tau(const std::vector<StdObservation>& observations, TauReading reading) {
  std::set<int> distinct;
  for (const auto& obs : observations) {
    if (obs.m < 1) throw std::invalid_argument("estimate_tau: observation with m < 1");
    if (!(obs.s >= 0.0) || !std::isfinite(obs.s))
      throw std::invalid_argument("estimate_tau: observation with invalid s");
    distinct.insert(obs.m);
  }
  if (distinct.size() < 2)
    throw std::invalid_argument("estimate_tau: need >= 2 observations with distinct m");

  // minimize sum_k (y_k - tau c_k)^2  ->  tau = sum y c / sum c^2
  double num = 0.0, den = 0.0;
  for (const auto& obs : observations) {
    const double c = 1.0 / std::sqrt(static_cast<double>(obs.m));
    const double y = reading == TauReading::Consistent ? obs.s * c : obs.s;
    num += y * c;
    den += c * c;
  }
  if (den == 0.0) return 0.0;
  return std::max(0.0, num / den);
}

ProbeResult run_noise_probe(NoisyOracle& oracle, const SearchSpace& space, Rng& rng,
                            const ProbeConfig& config) {
  if (config.schedule.size() < 2)
    throw std::invalid_argument("noise probe: schedule needs >= 2 batch sizes");

  long long budget = std::llround(config.budget_fraction * oracle.budget_total());
  budget = std::max(budget, config.min_budget);
  budget = std::min(budget, oracle.remaining());

  Vector x(space.dimension());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < x.size(); ++i)
    x[i] = space.lower[i] + (space.upper[i] - space.lower[i]) * unit(rng);

  const long long share = budget / static_cast<long long>(config.schedule.size());
  ProbeResult result;
  const long long used_before = oracle.budget_used();
  for (int m : config.schedule) {
    const int repeats = static_cast<int>(share / m);
    if (repeats < 1) continue;
    result.observations.push_back(sample_std(oracle, x, m, repeats));
  }
  result.spent = oracle.budget_used() - used_before;
  if (result.observations.size() < 2) {
    // budget too small to probe; declare the noise level unknown-as-zero
    result.tau_hat = 0.0;
    return result;
  }
  result.tau_hat = estimate_tau(result.observations, config.reading);
  return result;
}

}  // namespace arcma
