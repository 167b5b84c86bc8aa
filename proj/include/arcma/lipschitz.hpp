#pragma once

#include "arcma/types.hpp"

namespace arcma {

/// Gaussian-process surrogate with kernel exp(-theta ||x - x'||^2) and a
/// white-noise diagonal, fitted to one population. Immutable after fitting.
struct GpModel {
  Matrix inputs;           // one point per row
  Vector weights;          // solves (G + noise_diag I) w = targets - mean
  double target_mean = 0.0;
  double theta = 1.0;
  double noise_diag = 0.0;  // effective value, including any jitter added

  int dimension() const { return static_cast<int>(inputs.cols()); }
};

/// Median heuristic: theta = 1 / (2 median^2) over pairwise distances, with
/// theta = 1 when all points coincide.
double select_bandwidth(const Matrix& inputs);

/// Fits the GP; targets are mean-centered before the solve. Escalates a
/// diagonal jitter (1e-10, x10, up to 1e-4) if the factorization fails and
/// throws EstimationFailed if it never succeeds.
GpModel fit_gp(const Matrix& inputs, const Vector& targets, double noise_diag);

double posterior_mean(const GpModel& model, const Vector& x);

/// Closed-form Hessian of the posterior mean:
///   H(x) = sum_i w_i k(x, x_i) (4 theta^2 r_i r_i^T - 2 theta I),
/// with r_i = x - x_i. Symmetric by construction.
Matrix posterior_mean_hessian(const GpModel& model, const Vector& x);

/// n points of the form sum_i u_i x_i with u drawn flat-Dirichlet, i.e.
/// uniform over the weight simplex. Covers the convex hull of the inputs but
/// concentrates near the centroid; not volume-uniform.
Matrix sample_convex_hull(const Matrix& inputs, int n, Rng& rng);

/// Estimated Lipschitz constant of the objective's gradient over the
/// population's hull: the max spectral norm of the posterior-mean Hessian at
/// 100 d hull samples plus the population points themselves. Floored at
/// 1e-12. Propagates EstimationFailed from fit_gp.
double estimate_lipschitz(const Matrix& inputs, const Vector& targets, double noise_diag,
                          Rng& rng);

}  // namespace arcma
