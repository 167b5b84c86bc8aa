#include "arcma/es_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace arcma {

namespace {

constexpr double kEigenFloorRatio = 1e-14;  // keeps cond(C) <= 1e14

// Symmetrize, floor eigenvalues, and cache the symmetric square root and the
// top eigenvalue. Called after every covariance change.
void refresh_decomposition(EsState& state) {
  state.cov = (0.5 * (state.cov + state.cov.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(state.cov);
  Vector evals = eig.eigenvalues();
  const double top = evals.maxCoeff();
  if (!(top > 0.0) || !std::isfinite(top)) {
    // total collapse; restart the shape from scratch
    state.cov = Matrix::Identity(state.dimension(), state.dimension());
    state.sqrt_cov = state.cov;
    state.s_max = 1.0;
    return;
  }
  const double floor = kEigenFloorRatio * top;
  bool repaired = false;
  for (int i = 0; i < evals.size(); ++i) {
    if (evals[i] < floor) {
      evals[i] = floor;
      repaired = true;
    }
  }
  if (repaired)
    state.cov = eig.eigenvectors() * evals.asDiagonal() * eig.eigenvectors().transpose();
  state.sqrt_cov = eig.eigenvectors() * evals.cwiseSqrt().asDiagonal() *
                   eig.eigenvectors().transpose();
  state.s_max = evals.maxCoeff();
}

}  // namespace

CmaConstants cma_constants(int dimension, double mu_eff) {
  const double d = dimension;
  CmaConstants k;
  k.mu_eff = mu_eff;
  k.c_sigma = (mu_eff + 2.0) / (d + mu_eff + 5.0);
  k.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (d + 1.0)) - 1.0) + k.c_sigma;
  k.c_c = (4.0 + mu_eff / d) / (d + 4.0 + 2.0 * mu_eff / d);
  k.c1 = 2.0 / ((d + 1.3) * (d + 1.3) + mu_eff);
  k.c_mu = std::min(1.0 - k.c1,
                    2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((d + 2.0) * (d + 2.0) + mu_eff));
  k.chi_d = std::sqrt(d) * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d));
  return k;
}

EsState init_state(const SearchSpace& space, int lambda, int mu, std::uint64_t seed) {
  space.validate();
  if (lambda < 2) throw std::invalid_argument("init_state: lambda must be >= 2");
  if (mu < 1 || mu > lambda) throw std::invalid_argument("init_state: mu must be in [1, lambda]");

  const int d = space.dimension();
  EsState state;
  state.lambda = lambda;
  state.mu = mu;
  {
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < mu; ++r) {
      const double w = std::log((lambda + 1.0) / 2.0) - std::log(static_cast<double>(r + 1));
      sum += w;
      sum_sq += w * w;
    }
    state.default_mu_eff = sum * sum / sum_sq;
  }
  state.rng = Rng(seed);
  state.mean = Vector(d);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < d; ++i)
    state.mean[i] = space.lower[i] + (space.upper[i] - space.lower[i]) * unit(state.rng);
  state.sigma = 0.1 * (space.upper - space.lower).cwiseAbs().maxCoeff();
  state.cov = Matrix::Identity(d, d);
  state.sqrt_cov = state.cov;
  state.s_max = 1.0;
  state.path_sigma = Vector::Zero(d);
  state.path_cov = Vector::Zero(d);
  return state;
}

std::vector<Candidate> sample_population(EsState& state) {
  const int d = state.dimension();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Candidate> pop(state.lambda);
  for (auto& cand : pop) {
    cand.eps = Vector(d);
    for (int i = 0; i < d; ++i) cand.eps[i] = state.sigma * normal(state.rng);
    cand.x = state.mean + state.sqrt_cov * cand.eps;
  }
  return pop;
}

void recombine_mean(EsState& state, const Vector& weights,
                    const std::vector<Candidate>& candidates) {
  if (weights.size() != static_cast<long>(candidates.size()))
    throw std::invalid_argument("recombine_mean: weights must match the population size");
  if (!weights.allFinite())
    throw std::invalid_argument("recombine_mean: weights must be finite");
  Vector eps_w = Vector::Zero(state.dimension());
  for (size_t i = 0; i < candidates.size(); ++i) eps_w += weights[i] * candidates[i].eps;
  state.mean += state.sqrt_cov * eps_w;
}

void adapt(EsState& state, const Vector& weights, const std::vector<Candidate>& candidates,
           const AdaptOptions& options) {
  if (weights.size() != static_cast<long>(candidates.size()))
    throw std::invalid_argument("adapt: weights must match the population size");
  if (!weights.allFinite()) throw std::invalid_argument("adapt: weights must be finite");

  const int d = state.dimension();
  const double sum_w = weights.sum();
  const double sum_w2 = weights.squaredNorm();
  // Realized selection mass normalizes the weighted steps; the learning
  // rates stay at the default profile's value. Near-uniform weight vectors
  // push 1/sum(w^2) toward lambda, and feeding that into c_mu re-learns the
  // covariance from single populations, which is unstable.
  const double mu_eff = sum_w2 > 0.0 ? 1.0 / sum_w2 : 1.0;
  const CmaConstants k = cma_constants(d, state.default_mu_eff);

  Vector eps_w = Vector::Zero(d);
  for (size_t i = 0; i < candidates.size(); ++i) eps_w += weights[i] * candidates[i].eps;

  // realized step in the isotropic frame: C^{-1/2} (m_new - m_old) / sigma
  Vector iso_step = eps_w / state.sigma;
  if (options.csa == CsaCompensation::ScaleStep) iso_step *= 2.0;
  state.path_sigma = (1.0 - k.c_sigma) * state.path_sigma +
                     std::sqrt(k.c_sigma * (2.0 - k.c_sigma) * mu_eff) * iso_step;

  const double length_ref = options.csa == CsaCompensation::HalveNorm ? 0.5 * k.chi_d : k.chi_d;
  const double decay = 1.0 - std::pow(1.0 - k.c_sigma, 2.0 * (state.iteration + 1));
  const bool h_sigma =
      state.path_sigma.norm() / std::sqrt(decay) < (1.4 + 2.0 / (d + 1.0)) * length_ref;

  const Vector y_w = state.sqrt_cov * eps_w / state.sigma;
  state.path_cov = (1.0 - k.c_c) * state.path_cov;
  if (h_sigma) state.path_cov += std::sqrt(k.c_c * (2.0 - k.c_c) * mu_eff) * y_w;

  Matrix rank_mu = Matrix::Zero(d, d);
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const Vector y = state.sqrt_cov * candidates[i].eps / state.sigma;
    rank_mu.noalias() += weights[i] * y * y.transpose();
  }
  const double stall = h_sigma ? 0.0 : k.c_c * (2.0 - k.c_c);
  state.cov = (1.0 - k.c1 - k.c_mu * sum_w) * state.cov +
              k.c1 * (state.path_cov * state.path_cov.transpose() + stall * state.cov) +
              k.c_mu * rank_mu;

  state.sigma *= std::exp((k.c_sigma / k.d_sigma) * (state.path_sigma.norm() / length_ref - 1.0));
  state.sigma = std::clamp(state.sigma, 1e-300, 1e300);

  ++state.iteration;
  refresh_decomposition(state);
}

double largest_eigenvalue(const Matrix& cov) {
  if (cov.rows() != cov.cols()) throw std::invalid_argument("largest_eigenvalue: matrix not square");
  const double scale = cov.cwiseAbs().maxCoeff();
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(scale, 1.0))
    throw std::invalid_argument("largest_eigenvalue: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

Vector ranked_recombination_weights(const std::vector<Candidate>& candidates, int mu) {
  const int lambda = static_cast<int>(candidates.size());
  if (mu < 1 || mu > lambda)
    throw std::invalid_argument("ranked_recombination_weights: mu must be in [1, lambda]");
  std::vector<int> order(lambda);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return candidates[a].mean_value < candidates[b].mean_value;
  });

  Vector raw(mu);
  for (int r = 0; r < mu; ++r)
    raw[r] = std::log((lambda + 1.0) / 2.0) - std::log(static_cast<double>(r + 1));
  raw /= raw.sum();

  Vector weights = Vector::Zero(lambda);
  for (int r = 0; r < mu; ++r) weights[order[r]] = raw[r];
  return weights;
}

}  // namespace arcma
