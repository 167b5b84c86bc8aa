#include "arcma/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace arcma {

namespace {

Matrix squared_distances(const Matrix& x) {
  const Vector sq = x.rowwise().squaredNorm();
  Matrix d2 = sq.replicate(1, x.rows()) + sq.transpose().replicate(x.rows(), 1) -
              2.0 * x * x.transpose();
  return d2.cwiseMax(0.0);
}

}  // namespace

double select_bandwidth(const Matrix& inputs) {
  const int n = static_cast<int>(inputs.rows());
  if (n < 2) throw std::invalid_argument("select_bandwidth: need at least 2 points");
  std::vector<double> dists;
  dists.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      dists.push_back((inputs.row(i) - inputs.row(j)).norm());
  const size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  double median = dists[mid];
  if (dists.size() % 2 == 0) {
    // lower neighbor of the upper-mid element
    const double below = *std::max_element(dists.begin(), dists.begin() + mid);
    median = 0.5 * (median + below);
  }
  if (median <= 0.0) return 1.0;
  return 1.0 / (2.0 * median * median);
}

GpModel fit_gp(const Matrix& inputs, const Vector& targets, double noise_diag) {
  const int n = static_cast<int>(inputs.rows());
  if (n < 1) throw std::invalid_argument("fit_gp: need at least 1 point");
  if (targets.size() != n) throw std::invalid_argument("fit_gp: targets size mismatch");
  if (noise_diag < 0.0) throw std::invalid_argument("fit_gp: noise must be nonnegative");

  GpModel model;
  model.inputs = inputs;
  model.theta = n < 2 ? 1.0 : select_bandwidth(inputs);
  model.target_mean = targets.mean();
  const Vector centered = targets.array() - model.target_mean;
  if (n == 1) {
    // a centered single target is zero; the posterior mean is constant
    model.weights = Vector::Zero(1);
    model.noise_diag = noise_diag;
    return model;
  }

  const Matrix gram = (-model.theta * squared_distances(inputs)).array().exp();
  double jitter = 0.0;
  while (true) {
    Matrix system = gram;
    system.diagonal().array() += noise_diag + jitter;
    Eigen::LLT<Matrix> llt(system);
    if (llt.info() == Eigen::Success) {
      model.weights = llt.solve(centered);
      const double residual = (system * model.weights - centered).norm();
      if (residual <= 1e-8 * std::max(centered.norm(), 1e-300) || centered.norm() == 0.0) {
        model.noise_diag = noise_diag + jitter;
        return model;
      }
    }
    jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
    if (jitter > 1e-4) throw EstimationFailed("fit_gp: system unsolvable after jitter escalation");
  }
}

double posterior_mean(const GpModel& model, const Vector& x) {
  const Vector d2 = (model.inputs.rowwise() - x.transpose()).rowwise().squaredNorm();
  const Vector k = (-model.theta * d2.array()).exp();
  return model.weights.dot(k) + model.target_mean;
}

Matrix posterior_mean_hessian(const GpModel& model, const Vector& x) {
  const int d = model.dimension();
  const Matrix r = (-model.inputs).rowwise() + x.transpose();  // rows: x - x_i
  const Vector k = (-model.theta * r.rowwise().squaredNorm().array()).exp();
  const Vector wk = model.weights.cwiseProduct(k);
  Matrix h = (4.0 * model.theta * model.theta) * r.transpose() * wk.asDiagonal() * r;
  h.diagonal().array() -= 2.0 * model.theta * wk.sum();
  return 0.5 * (h + h.transpose());
}

Matrix sample_convex_hull(const Matrix& inputs, int n, Rng& rng) {
  const int points = static_cast<int>(inputs.rows());
  if (points < 1) throw std::invalid_argument("sample_convex_hull: empty input");
  if (n < 1) throw std::invalid_argument("sample_convex_hull: need n >= 1");
  std::exponential_distribution<double> expo(1.0);
  Matrix samples(n, inputs.cols());
  Vector u(points);
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i < points; ++i) u[i] = expo(rng);
    u /= u.sum();
    samples.row(s) = u.transpose() * inputs;
  }
  return samples;
}

double estimate_lipschitz(const Matrix& inputs, const Vector& targets, double noise_diag,
                          Rng& rng) {
  const GpModel model = fit_gp(inputs, targets, noise_diag);
  const int d = model.dimension();
  const Matrix hull = sample_convex_hull(inputs, 100 * d, rng);

  double k_hat = 0.0;
  const auto visit = [&](const Vector& q) {
    const Matrix h = posterior_mean_hessian(model, q);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
    k_hat = std::max(k_hat, eig.eigenvalues().cwiseAbs().maxCoeff());
  };
  for (int i = 0; i < hull.rows(); ++i) visit(hull.row(i));
  for (int i = 0; i < inputs.rows(); ++i) visit(inputs.row(i));
  return std::max(k_hat, 1e-12);
}

}  // namespace arcma
