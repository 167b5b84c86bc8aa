#include "arcma/efficiency_lab.hpp"

#include <algorithm>
#include <cmath>

#include "arcma/noise_probe.hpp"

namespace arcma {

namespace {

constexpr long long kFreezeBudget = 10'000'000;  // ample for ~100 iterations

}  // namespace

std::vector<long long> log_spaced_grid(long long m_min, long long m_max, int points) {
  if (m_min < 1 || m_max < m_min) throw std::invalid_argument("grid: invalid range");
  if (points < 2) throw std::invalid_argument("grid: need at least 2 points");
  if (m_max - m_min + 1 < points)
    throw std::invalid_argument("grid: fewer integers in range than requested points");
  std::vector<long long> grid;
  const double lo = std::log(static_cast<double>(m_min));
  const double hi = std::log(static_cast<double>(m_max));
  for (int i = 0; i < points; ++i) {
    const double t = lo + (hi - lo) * i / (points - 1);
    long long m = std::llround(std::exp(t));
    if (!grid.empty() && m <= grid.back()) m = grid.back() + 1;  // keep points distinct
    grid.push_back(m);
  }
  return grid;
}

std::vector<double> theoretical_curve(double sigma, double offset, const BoundCoefficients& coeffs,
                                      const std::vector<long long>& m_grid) {
  if (offset == 0.0) throw std::invalid_argument("theoretical_curve: offset must be nonzero");
  if (!(sigma > 0.0)) throw std::invalid_argument("theoretical_curve: sigma must be positive");
  const double scale = sigma * sigma / (2.0 * offset * offset);
  std::vector<double> out;
  out.reserve(m_grid.size());
  for (long long m : m_grid) {
    const double inv = 1.0 / static_cast<double>(m);
    out.push_back(scale * (-coeffs.a * inv * inv + coeffs.b * inv));
  }
  return out;
}

std::pair<EsState, FrozenState> freeze_state(const EfficiencySpec& spec) {
  if (spec.freeze_iteration < 1)
    throw std::invalid_argument("efficiency: freeze_iteration must be >= 1");
  const BenchmarkFunction fn = make_function(spec.function, spec.dimension);

  NoisyOracle oracle(fn, spec.tau, kFreezeBudget, make_rng(spec.seed, 0));
  EsState state = init_state(fn.space, spec.lambda, std::max(1, spec.lambda / 2),
                             stream_seed(spec.seed, 1));
  Rng probe_rng = make_rng(spec.seed, 2);
  Rng estimator_rng = make_rng(spec.seed, 3);

  ArOptions opts;
  opts.m_cap = 0.01 * kFreezeBudget;
  const ProbeResult probe = run_noise_probe(oracle, fn.space, probe_rng);
  ArController ctrl = ArController::make(spec.dimension, probe.tau_hat, opts);

  const auto capture = [&](const IterationLog& row) {
    FrozenState frozen;
    frozen.function = spec.function;
    frozen.dimension = spec.dimension;
    frozen.lambda = spec.lambda;
    frozen.iteration = row.iteration;
    frozen.sigma = state.sigma;
    frozen.offset = row.offset;
    frozen.s_max = state.s_max;
    frozen.k_true = gradient_lipschitz_constant(spec.function, spec.dimension);
    frozen.tau = spec.tau;
    frozen.grad_norm_sq =
        (state.sqrt_cov * true_gradient(spec.function, state.mean)).squaredNorm();
    frozen.coeffs = bound_coefficients(spec.dimension, frozen.k_true, frozen.s_max, frozen.tau,
                                       spec.lambda, frozen.offset, frozen.sigma,
                                       frozen.grad_norm_sq);
    return frozen;
  };

  std::vector<IterationLog> logs;
  const TerminalReason reason =
      ar_run(oracle, state, ctrl, estimator_rng, logs, spec.freeze_iteration);
  if (reason != TerminalReason::MaxIterations || logs.empty())
    throw std::runtime_error("efficiency: budget exhausted before the freeze iteration");

  // The realized offset fluctuates from one population to the next, so the
  // bound can be degenerate (b <= 0) or peak below the tested grid at the
  // exact requested iteration. Walk forward through the convergent phase
  // until the curve has a positive maximizer inside the grid, which is what
  // makes the maximizer comparison meaningful.
  const auto interior = [&](const FrozenState& fr) {
    if (fr.coeffs.b <= 0.0) return false;
    const double m_star = 2.0 * fr.coeffs.a / fr.coeffs.b;
    return m_star >= std::max<double>(5, spec.m_min) && m_star <= static_cast<double>(spec.m_max);
  };
  FrozenState frozen = capture(logs.back());
  EsState positive_state;
  FrozenState positive_frozen;
  bool seen_positive = false;
  if (frozen.coeffs.b > 0.0) {
    positive_state = state;
    positive_frozen = frozen;
    seen_positive = true;
  }
  const long horizon = spec.freeze_iteration + std::max<long>(500, 4 * spec.freeze_iteration);
  while (!interior(frozen) && state.iteration < horizon) {
    IterationLog row;
    if (ar_iteration(oracle, state, ctrl, estimator_rng, &row) == IterationStatus::BudgetExhausted)
      break;
    frozen = capture(row);
    if (frozen.coeffs.b > 0.0 && (!seen_positive || !interior(positive_frozen))) {
      positive_state = state;
      positive_frozen = frozen;
      seen_positive = true;
    }
  }
  if (interior(frozen)) return {state, frozen};
  if (!seen_positive)
    throw std::runtime_error(
        "efficiency: bound degenerate (b <= 0) everywhere near the requested iteration");
  return {positive_state, positive_frozen};  // positive but edge maximizer
}

EfficiencyCurve simulate_from_state(const EfficiencySpec& spec, const EsState& state,
                                    const FrozenState& frozen) {
  if (spec.trials < 2) throw std::invalid_argument("efficiency: need trials >= 2");
  if (frozen.coeffs.b <= 0.0)
    throw std::runtime_error(
        "efficiency: bound degenerate at the frozen state (b <= 0); freeze a different "
        "iteration");

  const BenchmarkFunction fn = make_function(spec.function, spec.dimension);
  const double base_value = fn.evaluate_true(state.mean);

  EfficiencyCurve curve;
  curve.frozen = frozen;
  curve.m_grid = log_spaced_grid(spec.m_min, spec.m_max, spec.grid_points);
  curve.theoretical = theoretical_curve(frozen.sigma, frozen.offset, frozen.coeffs, curve.m_grid);

  for (size_t gi = 0; gi < curve.m_grid.size(); ++gi) {
    const long long reevals = curve.m_grid[gi];
    double sum = 0.0, sum_sq = 0.0;
    for (int trial = 0; trial < spec.trials; ++trial) {
      const std::uint64_t fork = 0x10000ULL + gi * static_cast<std::uint64_t>(spec.trials) + trial;
      EsState sim = state;
      sim.rng = make_rng(spec.seed, 2 * fork);
      NoisyOracle oracle(fn, spec.tau, (spec.lambda + 1) * reevals,
                         make_rng(spec.seed, 2 * fork + 1));

      auto candidates = sample_population(sim);
      compute_deltas(oracle, sim, candidates, reevals);
      Vector deltas(spec.lambda);
      for (int i = 0; i < spec.lambda; ++i) deltas[i] = candidates[i].delta;
      const Vector weights = proportional_weights(deltas, offset_from_deltas(deltas));
      recombine_mean(sim, weights, candidates);

      const double gain = (base_value - fn.evaluate_true(sim.mean)) / reevals;
      sum += gain;
      sum_sq += gain * gain;
    }
    const double mean = sum / spec.trials;
    const double var = std::max(0.0, (sum_sq - spec.trials * mean * mean) / (spec.trials - 1));
    curve.empirical_mean.push_back(mean);
    curve.empirical_se.push_back(std::sqrt(var / spec.trials));
  }

  curve.m_star_theoretical = 2.0 * frozen.coeffs.a / frozen.coeffs.b;
  const auto best = std::max_element(curve.empirical_mean.begin(), curve.empirical_mean.end());
  curve.m_star_empirical = curve.m_grid[best - curve.empirical_mean.begin()];
  return curve;
}

EfficiencyCurve simulate_efficiency(const EfficiencySpec& spec) {
  const auto [state, frozen] = freeze_state(spec);
  return simulate_from_state(spec, state, frozen);
}

}  // namespace arcma
