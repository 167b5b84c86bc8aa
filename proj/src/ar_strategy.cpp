#include "arcma/ar_strategy.hpp"

#include <algorithm>
#include <cmath>

#include "arcma/lipschitz.hpp"

namespace arcma {

std::string to_string(TerminalReason reason) {
  switch (reason) {
    case TerminalReason::Budget: return "budget";
    case TerminalReason::ScheduleComplete: return "schedule_complete";
    case TerminalReason::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

ArController ArController::make(int dimension, double tau_hat, const ArOptions& opts) {
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0))
    throw std::invalid_argument("ar: alpha must lie strictly inside (0, 1)");
  if (!(opts.beta > 0.0 && opts.beta < 1.0))
    throw std::invalid_argument("ar: beta must lie strictly inside (0, 1)");
  if (opts.m_init < 1.0) throw std::invalid_argument("ar: m_init must be >= 1");
  if (opts.m_cap < 1.0) throw std::invalid_argument("ar: m_cap must be >= 1");
  if (tau_hat < 0.0) throw std::invalid_argument("ar: tau_hat must be nonnegative");

  ArController ctrl;
  ctrl.m_smooth = std::min(opts.m_init, opts.m_cap);
  ctrl.grad_est = Vector::Zero(dimension);
  ctrl.tau_hat = tau_hat;
  ctrl.k_hat = 1.0;
  ctrl.opts = opts;
  return ctrl;
}

double compute_deltas(NoisyOracle& oracle, const EsState& state,
                      std::vector<Candidate>& candidates, long long reevals,
                      bool charge_mean_reeval) {
  if (reevals < 1) throw std::invalid_argument("compute_deltas: reevals must be >= 1");
  const long long charged =
      (static_cast<long long>(candidates.size()) + (charge_mean_reeval ? 1 : 0)) * reevals;
  if (charged > oracle.remaining()) throw BudgetExhausted();

  const double reference = charge_mean_reeval
                               ? oracle.mean_evaluate(state.mean, reevals)
                               : oracle.mean_evaluate_uncharged(state.mean, reevals);
  for (auto& cand : candidates) {
    cand.mean_value = oracle.mean_evaluate(cand.x, reevals);
    cand.delta = reference - cand.mean_value;
  }
  return reference;
}

double offset_from_deltas(const Vector& deltas) {
  if (deltas.size() < 2) throw std::invalid_argument("offset: need at least 2 deltas");
  if (!deltas.allFinite()) throw std::invalid_argument("offset: deltas must be finite");
  return -deltas.minCoeff();
}

Vector proportional_weights(const Vector& deltas, double offset) {
  const int lambda = static_cast<int>(deltas.size());
  Vector shifted = deltas.array() + offset;
  if (shifted.minCoeff() < 0.0)
    throw std::invalid_argument("proportional_weights: shifted delta below zero");
  const double denom = shifted.sum();
  if (denom <= 0.0) return Vector::Constant(lambda, 1.0 / lambda);
  return shifted / denom;
}

void update_gradient_estimate(ArController& ctrl, const Vector& deltas, double offset,
                              const std::vector<Candidate>& candidates, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gradient estimate: sigma must be positive");
  const int lambda = static_cast<int>(candidates.size());
  Vector g_star = Vector::Zero(ctrl.grad_est.size());
  for (int i = 0; i < lambda; ++i) g_star += (deltas[i] + offset) * candidates[i].eps;
  g_star *= -1.0 / (lambda * sigma * sigma);
  ctrl.grad_est = (1.0 - ctrl.opts.alpha) * ctrl.grad_est + ctrl.opts.alpha * g_star;
}

BoundCoefficients bound_coefficients(int dimension, double k_hat, double s_max, double tau_hat,
                                     int lambda, double offset, double sigma,
                                     double grad_norm_sq) {
  const double d = dimension;
  const double ks = k_hat * s_max;
  BoundCoefficients coeffs;
  coeffs.a = d * ks * tau_hat * tau_hat / (4.0 * lambda);
  coeffs.b = (offset - sigma * sigma * (lambda + d + 1.0) * ks / (4.0 * lambda)) * grad_norm_sq -
             offset * offset * d * ks / (4.0 * lambda);
  return coeffs;
}

std::optional<double> optimal_reevaluations(const BoundCoefficients& coeffs) {
  if (coeffs.a < 0.0) throw std::invalid_argument("optimal_reevaluations: a must be >= 0");
  if (coeffs.b > 0.0) return 2.0 * coeffs.a / coeffs.b;
  return std::nullopt;
}

void smooth_reevaluations(ArController& ctrl, std::optional<double> m_star) {
  if (!m_star) return;
  const double blended = (1.0 - ctrl.opts.beta) * ctrl.m_smooth + ctrl.opts.beta * *m_star;
  ctrl.m_smooth = std::clamp(blended, 1.0, ctrl.opts.m_cap);
}

long long planned_reevals(const ArController& ctrl, long long remaining, int lambda) {
  const long long denom = lambda + (ctrl.opts.charge_mean_reeval ? 1 : 0);
  long long m = std::max<long long>(1, std::llround(ctrl.m_smooth));
  m = std::min(m, static_cast<long long>(ctrl.opts.m_cap));
  return std::min(m, remaining / denom);
}

IterationStatus ar_iteration(NoisyOracle& oracle, EsState& state, ArController& ctrl,
                             Rng& estimator_rng, IterationLog* log) {
  const int lambda = state.lambda;
  const int d = state.dimension();

  const long long reevals = planned_reevals(ctrl, oracle.remaining(), lambda);
  if (reevals < 1) return IterationStatus::BudgetExhausted;

  auto candidates = sample_population(state);
  compute_deltas(oracle, state, candidates, reevals, ctrl.opts.charge_mean_reeval);

  Vector deltas(lambda);
  for (int i = 0; i < lambda; ++i) deltas[i] = candidates[i].delta;

  double offset = offset_from_deltas(deltas);
  Vector weights;
  if (ctrl.opts.probabilistic_offset) {
    offset = ctrl.opts.offset_c * ctrl.tau_hat / std::sqrt(static_cast<double>(reevals)) -
             state.sigma * ctrl.grad_est.norm();
    const Vector shifted = (deltas.array() + offset).cwiseMax(0.0);
    const double denom = shifted.sum();
    weights = denom > 0.0 ? Vector(shifted / denom) : Vector::Constant(lambda, 1.0 / lambda);
  } else {
    weights = proportional_weights(deltas, offset);
  }

  recombine_mean(state, weights, candidates);
  const double s_max = state.s_max;

  Matrix inputs(lambda, d);
  Vector targets(lambda);
  for (int i = 0; i < lambda; ++i) {
    inputs.row(i) = candidates[i].x.transpose();
    targets[i] = candidates[i].mean_value;
  }
  const double gp_noise = ctrl.opts.gp_noise_variance
                              ? ctrl.tau_hat * ctrl.tau_hat / static_cast<double>(reevals)
                              : ctrl.tau_hat / std::sqrt(static_cast<double>(reevals));
  try {
    ctrl.k_hat = estimate_lipschitz(inputs, targets, gp_noise, estimator_rng);
  } catch (const EstimationFailed&) {
    // keep the previous estimate
  }

  update_gradient_estimate(ctrl, deltas, offset, candidates, state.sigma);

  const BoundCoefficients coeffs =
      bound_coefficients(d, ctrl.k_hat, s_max, ctrl.tau_hat, lambda, offset, state.sigma,
                         ctrl.grad_est.squaredNorm());
  smooth_reevaluations(ctrl, optimal_reevaluations(coeffs));

  adapt(state, weights, candidates, {ctrl.opts.csa});

  if (log) {
    log->iteration = state.iteration;
    log->budget_used = oracle.budget_used();
    log->true_error = oracle.target().evaluate_true(state.mean) - oracle.target().optimum_value;
    log->sigma = state.sigma;
    log->reevals = static_cast<double>(reevals);
    log->s_max = s_max;
    log->k_hat = ctrl.k_hat;
    log->g_norm = ctrl.grad_est.norm();
    log->offset = offset;
    log->bound_a = coeffs.a;
    log->bound_b = coeffs.b;
  }
  return IterationStatus::Ok;
}

TerminalReason ar_run(NoisyOracle& oracle, EsState& state, ArController& ctrl,
                      Rng& estimator_rng, std::vector<IterationLog>& logs,
                      long max_iterations) {
  while (true) {
    if (max_iterations > 0 && state.iteration >= max_iterations)
      return TerminalReason::MaxIterations;
    IterationLog row;
    if (ar_iteration(oracle, state, ctrl, estimator_rng, &row) ==
        IterationStatus::BudgetExhausted)
      return TerminalReason::Budget;
    logs.push_back(row);
  }
}

}  // namespace arcma
