#pragma once

#include <cstdint>
#include <vector>

#include "arcma/ar_strategy.hpp"
#include "arcma/benchmarks.hpp"

namespace arcma {

/// Frozen-state parameters behind the theoretical efficiency curve. K and
/// tau are the true analytic values for the chosen function; sigma, s_max
/// and the offset come from the frozen iteration, and the gradient term uses
/// the true gradient at the frozen mean.
struct FrozenState {
  FunctionId function;
  int dimension = 0;
  int lambda = 0;
  long iteration = 0;
  double sigma = 0.0;
  double offset = 0.0;
  double s_max = 0.0;
  double k_true = 0.0;
  double tau = 0.0;
  double grad_norm_sq = 0.0;  // ||C^{1/2} grad L(m)||^2
  BoundCoefficients coeffs;
};

struct EfficiencyCurve {
  std::vector<long long> m_grid;
  std::vector<double> empirical_mean;
  std::vector<double> empirical_se;
  std::vector<double> theoretical;
  double m_star_theoretical = 0.0;
  long long m_star_empirical = 0;
  FrozenState frozen;
};

struct EfficiencySpec {
  FunctionId function = FunctionId::Sphere;
  int dimension = 10;
  double tau = 1.0;
  int lambda = 20;
  long freeze_iteration = 100;
  long long m_min = 1;
  long long m_max = 200;
  int grid_points = 40;
  int trials = 50;
  std::uint64_t seed = 1;
};

/// Log-spaced integer grid, deduplicated, spanning [m_min, m_max].
std::vector<long long> log_spaced_grid(long long m_min, long long m_max, int points);

/// Pointwise (sigma^2 / 2A^2)(-a/M^2 + b/M).
std::vector<double> theoretical_curve(double sigma, double offset, const BoundCoefficients& coeffs,
                                      const std::vector<long long>& m_grid);

/// Runs the adaptive optimizer to the requested iteration and captures the
/// state together with the bound parameters: true Lipschitz constant, true
/// gradient at the frozen mean, and the frozen iteration's realized offset.
std::pair<EsState, FrozenState> freeze_state(const EfficiencySpec& spec);

/// For every M on the grid, measures the true one-iteration improvement per
/// re-evaluation across independent mutation trials from the given state.
/// Throws std::runtime_error when the bound is degenerate (b <= 0) there.
EfficiencyCurve simulate_from_state(const EfficiencySpec& spec, const EsState& state,
                                    const FrozenState& frozen);

/// freeze_state followed by simulate_from_state.
EfficiencyCurve simulate_efficiency(const EfficiencySpec& spec);

}  // namespace arcma
