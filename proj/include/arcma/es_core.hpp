#pragma once

#include <cstdint>
#include <vector>

#include "arcma/benchmarks.hpp"
#include "arcma/types.hpp"

namespace arcma {

/// One sampled candidate. eps is the mutation vector drawn from
/// sigma * N(0, I); x = mean + C^{1/2} eps. Values are filled in later by
/// whoever owns the oracle.
struct Candidate {
  Vector eps;
  Vector x;
  double mean_value = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
};

/// Standard CMA-ES internal constants for a given dimension and effective
/// selection mass. Recomputed every iteration because the AR weight scheme
/// changes mu_eff from one population to the next.
struct CmaConstants {
  double mu_eff;
  double c_sigma;
  double d_sigma;
  double c_c;
  double c1;
  double c_mu;
  double chi_d;  // E||N(0, I_d)||
};

CmaConstants cma_constants(int dimension, double mu_eff);

struct EsState {
  Vector mean;
  double sigma = 0.0;
  Matrix cov;
  Vector path_sigma;
  Vector path_cov;
  long iteration = 0;
  int lambda = 0;
  int mu = 0;
  Rng rng;

  // mu_eff of the default top-mu weight profile; learning rates stay pinned
  // to it while the realized per-iteration mu_eff only normalizes the paths
  double default_mu_eff = 1.0;

  // cached from the eigendecomposition of cov, refreshed after every update
  Matrix sqrt_cov;
  double s_max = 1.0;

  int dimension() const { return static_cast<int>(mean.size()); }
};

/// Compensation for recombination schemes whose realized step is shorter
/// than what cumulative step-size adaptation expects. ScaleStep doubles the
/// realized step inside the p_sigma update; HalveNorm instead halves the
/// expected-length reference. Proportional weights use ScaleStep.
enum class CsaCompensation { None, ScaleStep, HalveNorm };

struct AdaptOptions {
  CsaCompensation csa = CsaCompensation::None;
};

/// Fresh state: mean uniform in the box, sigma = 0.1 * ||upper - lower||_inf,
/// identity covariance, zero paths.
EsState init_state(const SearchSpace& space, int lambda, int mu, std::uint64_t seed);

/// Draws lambda candidates (eps and x filled, values unfilled).
std::vector<Candidate> sample_population(EsState& state);

/// m <- m + sum_i w_i C^{1/2} eps_i. Weights are per-candidate (length
/// lambda); schemes that use only a subset set the rest to zero.
void recombine_mean(EsState& state, const Vector& weights,
                    const std::vector<Candidate>& candidates);

/// Cumulative step-size adaptation plus rank-one/rank-mu covariance update,
/// with mu_eff = 1 / sum w_i^2 taken from the supplied weights. Restores
/// positive definiteness by eigenvalue flooring instead of failing.
void adapt(EsState& state, const Vector& weights, const std::vector<Candidate>& candidates,
           const AdaptOptions& options = {});

/// Largest eigenvalue of a symmetric matrix; rejects non-symmetric input.
double largest_eigenvalue(const Matrix& cov);

/// Default recombination weights: rank candidates by mean_value (ascending,
/// ties by index), give the best mu candidates log-decreasing weights that
/// sum to one, zero elsewhere. Returned in candidate order.
Vector ranked_recombination_weights(const std::vector<Candidate>& candidates, int mu);

}  // namespace arcma
