#pragma once

#include <optional>
#include <vector>

#include "arcma/benchmarks.hpp"
#include "arcma/es_core.hpp"
#include "arcma/run_log.hpp"
#include "arcma/types.hpp"

namespace arcma {

/// Coefficients of the per-iteration efficiency lower bound
///   gamma >= (sigma^2 / 2A^2) (-a / M^2 + b / M).
struct BoundCoefficients {
  double a = 0.0;
  double b = 0.0;
};

struct ArOptions {
  double alpha = 0.1;           // gradient smoothing
  double beta = 0.1;            // reevaluation-count smoothing
  double m_init = 1.0;
  double m_cap = 1e9;           // harness sets this to 1% of the budget
  bool charge_mean_reeval = true;
  // Offset strategy: Alg-style empirical -min(delta) by default; the
  // probabilistic alternative c tau / sqrt(M) - sigma ||g|| is experimental
  // and clamps negative shifted deltas at zero.
  bool probabilistic_offset = false;
  double offset_c = 3.0;
  bool gp_noise_variance = false;  // false: tau / sqrt(M) on the GP diagonal; true: tau^2 / M
  // With mu_eff recomputed from the realized weights every iteration, CSA is
  // already stationary under neutral selection; the step compensations exist
  // for A/B experiments and inflate sigma when left on.
  CsaCompensation csa = CsaCompensation::None;
};

/// Per-run adaptive re-evaluation state: the smoothed re-evaluation count,
/// the smoothed gradient estimate, and the two estimated problem constants.
struct ArController {
  double m_smooth = 1.0;
  Vector grad_est;
  double tau_hat = 0.0;
  double k_hat = 1.0;
  ArOptions opts;

  static ArController make(int dimension, double tau_hat, const ArOptions& opts);
};

/// Estimates the reference value L(mean) with M draws, fills each
/// candidate's mean_value with M fresh draws and delta = ref - mean_value.
/// Throws BudgetExhausted before any draw if the iteration cannot be paid
/// for in full. Returns the reference value.
double compute_deltas(NoisyOracle& oracle, const EsState& state,
                      std::vector<Candidate>& candidates, long long reevals,
                      bool charge_mean_reeval = true);

/// A = -min(deltas), making every shifted improvement nonnegative with
/// equality at the worst candidate.
double offset_from_deltas(const Vector& deltas);

/// w_i = (delta_i + A) / (sum_k delta_k + lambda A); uniform when the
/// denominator vanishes (all deltas equal).
Vector proportional_weights(const Vector& deltas, double offset);

/// One-sample gradient estimate g* = -(1 / lambda sigma^2) sum (delta_i + A)
/// eps_i, folded into the controller with exponential smoothing.
void update_gradient_estimate(ArController& ctrl, const Vector& deltas, double offset,
                              const std::vector<Candidate>& candidates, double sigma);

BoundCoefficients bound_coefficients(int dimension, double k_hat, double s_max, double tau_hat,
                                     int lambda, double offset, double sigma,
                                     double grad_norm_sq);

/// M* = 2a/b when b > 0; empty otherwise (the caller then skips smoothing
/// and keeps the previous count).
std::optional<double> optimal_reevaluations(const BoundCoefficients& coeffs);

/// Exponentially smooths m_smooth toward m_star and clamps it to
/// [1, m_cap]; no-op when m_star is absent.
void smooth_reevaluations(ArController& ctrl, std::optional<double> m_star);

/// Integer re-evaluation count for the next iteration: round(m_smooth),
/// at least 1, reduced so a full iteration fits the remaining budget.
/// Zero means the budget cannot pay for one more iteration.
long long planned_reevals(const ArController& ctrl, long long remaining, int lambda);

enum class IterationStatus { Ok, BudgetExhausted };

/// One full adaptive-re-evaluation iteration: sample, evaluate deltas,
/// offset, proportional weights, mean move, Lipschitz and gradient updates,
/// bound coefficients, count smoothing, covariance/step-size adaptation.
/// On BudgetExhausted the state is left untouched.
IterationStatus ar_iteration(NoisyOracle& oracle, EsState& state, ArController& ctrl,
                             Rng& estimator_rng, IterationLog* log = nullptr);

/// Runs ar_iteration until the budget is exhausted (or max_iterations is
/// reached, if positive), appending one log row per iteration.
TerminalReason ar_run(NoisyOracle& oracle, EsState& state, ArController& ctrl,
                      Rng& estimator_rng, std::vector<IterationLog>& logs,
                      long max_iterations = 0);

}  // namespace arcma
