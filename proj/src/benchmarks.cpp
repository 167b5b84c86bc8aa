#include "arcma/benchmarks.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace arcma {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dimension(const BenchmarkFunction& fn, const Vector& x) {
  if (static_cast<int>(x.size()) != fn.dimension)
    throw std::invalid_argument("evaluate_true: point has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(fn.dimension));
}

// Ellipsoid-family coefficient 100^{(i-1)/(d-1)}; a single coordinate gets
// weight 1.
double ellipsoid_coeff(int i, int d) {
  if (d == 1) return 1.0;
  return std::pow(100.0, static_cast<double>(i) / (d - 1));
}

}  // namespace

std::string to_string(FunctionId id) {
  switch (id) {
    case FunctionId::Sphere: return "sphere";
    case FunctionId::Ellipsoid: return "ellipsoid";
    case FunctionId::RotatedEllipsoid: return "rotated_ellipsoid";
    case FunctionId::HyperEllipsoid: return "hyper_ellipsoid";
    case FunctionId::RotatedHyperEllipsoid: return "rotated_hyper_ellipsoid";
    case FunctionId::Rastrigin: return "rastrigin";
    case FunctionId::Trid: return "trid";
    case FunctionId::CosineMixture: return "cosine_mixture";
    case FunctionId::Bohachevsky: return "bohachevsky";
    case FunctionId::Schwefel02: return "schwefel02";
    case FunctionId::SumAbsolute: return "sum_absolute";
    case FunctionId::NesterovF1: return "nesterov_f1";
    case FunctionId::NesterovF2: return "nesterov_f2";
    case FunctionId::GriewankNonsmooth: return "griewank_nonsmooth";
  }
  throw std::invalid_argument("unknown function id");
}

FunctionId function_id_from_string(const std::string& name) {
  static const std::pair<const char*, FunctionId> table[] = {
      {"sphere", FunctionId::Sphere},
      {"ellipsoid", FunctionId::Ellipsoid},
      {"rotated_ellipsoid", FunctionId::RotatedEllipsoid},
      {"hyper_ellipsoid", FunctionId::HyperEllipsoid},
      {"rotated_hyper_ellipsoid", FunctionId::RotatedHyperEllipsoid},
      {"rastrigin", FunctionId::Rastrigin},
      {"trid", FunctionId::Trid},
      {"cosine_mixture", FunctionId::CosineMixture},
      {"bohachevsky", FunctionId::Bohachevsky},
      {"schwefel02", FunctionId::Schwefel02},
      {"sum_absolute", FunctionId::SumAbsolute},
      {"nesterov_f1", FunctionId::NesterovF1},
      {"nesterov_f2", FunctionId::NesterovF2},
      {"griewank_nonsmooth", FunctionId::GriewankNonsmooth},
  };
  for (const auto& [key, id] : table)
    if (name == key) return id;
  throw std::invalid_argument("unknown function id: " + name);
}

bool is_smooth(FunctionId id) {
  switch (id) {
    case FunctionId::SumAbsolute:
    case FunctionId::NesterovF1:
    case FunctionId::NesterovF2:
    case FunctionId::GriewankNonsmooth:
      return false;
    default:
      return true;
  }
}

void SearchSpace::validate() const {
  if (lower.size() != upper.size())
    throw std::invalid_argument("search space: bound dimensions differ");
  if (lower.size() < 1) throw std::invalid_argument("search space: dimension must be >= 1");
  for (int i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("search space: lower[" + std::to_string(i) +
                                  "] must be strictly below upper");
}

double evaluate_true(FunctionId id, const Vector& x) {
  const int d = static_cast<int>(x.size());
  switch (id) {
    case FunctionId::Sphere:
      return x.squaredNorm();
    case FunctionId::Ellipsoid: {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += ellipsoid_coeff(i, d) * x[i] * x[i];
      return s;
    }
    case FunctionId::RotatedEllipsoid: {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += ellipsoid_coeff(d - 1 - i, d) * x[i] * x[i];
      return s;
    }
    case FunctionId::HyperEllipsoid: {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += (i + 1) * x[i] * x[i];
      return s;
    }
    case FunctionId::RotatedHyperEllipsoid: {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += (d - i) * x[i] * x[i];
      return s;
    }
    case FunctionId::Rastrigin: {
      double s = 10.0 * d;
      for (int i = 0; i < d; ++i) s += x[i] * x[i] - 10.0 * std::cos(2.0 * kPi * x[i]);
      return s;
    }
    case FunctionId::Trid: {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += (x[i] - 1.0) * (x[i] - 1.0);
      for (int i = 1; i < d; ++i) s -= x[i] * x[i - 1];
      return s;
    }
    case FunctionId::CosineMixture: {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += x[i] * x[i] - 0.1 * std::cos(5.0 * kPi * x[i]);
      return s;
    }
    case FunctionId::Bohachevsky: {
      double s = 0.0;
      for (int i = 0; i + 1 < d; ++i)
        s += x[i] * x[i] + 2.0 * x[i + 1] * x[i + 1] - 0.3 * std::cos(3.0 * kPi * x[i]) -
             0.4 * std::cos(4.0 * kPi * x[i + 1]) + 0.7;
      return s;
    }
    case FunctionId::Schwefel02: {
      double s = 0.0, prefix = 0.0;
      for (int i = 0; i < d; ++i) {
        prefix += x[i];
        s += prefix * prefix;
      }
      return s;
    }
    case FunctionId::SumAbsolute:
      return x.cwiseAbs().sum();
    case FunctionId::NesterovF1: {
      double s = 0.25 * (x[0] - 1.0) * (x[0] - 1.0);
      for (int i = 1; i < d; ++i) s += std::abs(x[i] - 2.0 * x[i - 1] * x[i - 1] + 1.0);
      return s;
    }
    case FunctionId::NesterovF2: {
      double s = 0.25 * std::abs(x[0] - 1.0);
      for (int i = 1; i < d; ++i) s += std::abs(x[i] - 2.0 * std::abs(x[i - 1]) + 1.0);
      return s;
    }
    case FunctionId::GriewankNonsmooth: {
      double quad = 0.0, prod = 1.0;
      for (int i = 0; i < d; ++i) {
        quad += x[i] * x[i];
        const double t = x[i] / (2.0 * std::sqrt(static_cast<double>(i + 1)));
        prod *= std::abs(std::cos(t)) - std::abs(std::sin(t));
      }
      return 1.0 + quad / 4000.0 - prod;
    }
  }
  throw std::invalid_argument("unknown function id");
}

double optimum_value(FunctionId id, int dimension) {
  if (dimension < 1) throw std::invalid_argument("optimum_value: dimension must be >= 1");
  switch (id) {
    case FunctionId::CosineMixture:
      return -0.1 * dimension;
    case FunctionId::Trid: {
      const double d = dimension;
      return -d * (d + 4.0) * (d - 1.0) / 6.0;
    }
    default:
      return 0.0;
  }
}

BenchmarkFunction make_function(FunctionId id, int dimension) {
  if (dimension < 1) throw std::invalid_argument("make_function: dimension must be >= 1");
  switch (id) {
    case FunctionId::Trid:
    case FunctionId::Bohachevsky:
    case FunctionId::Schwefel02:
      if (dimension < 2)
        throw std::invalid_argument("make_function: " + to_string(id) + " needs dimension >= 2");
      break;
    default:
      break;
  }

  double bound;
  switch (id) {
    case FunctionId::Sphere:
    case FunctionId::Ellipsoid:
    case FunctionId::RotatedEllipsoid:
    case FunctionId::HyperEllipsoid:
    case FunctionId::RotatedHyperEllipsoid:
    case FunctionId::Rastrigin:
      bound = 5.0;
      break;
    case FunctionId::Trid:
      bound = static_cast<double>(dimension) * dimension;
      break;
    case FunctionId::Bohachevsky:
      bound = 15.0;
      break;
    case FunctionId::Schwefel02:
      bound = 10.0;
      break;
    default:  // the non-smooth suite and the cosine mixture live on [-1, 1]^d
      bound = 1.0;
      break;
  }

  BenchmarkFunction fn;
  fn.id = id;
  fn.dimension = dimension;
  fn.space.lower = Vector::Constant(dimension, -bound);
  fn.space.upper = Vector::Constant(dimension, bound);
  fn.optimum_value = optimum_value(id, dimension);

  switch (id) {
    case FunctionId::Trid: {
      fn.minimizer = Vector(dimension);
      for (int i = 0; i < dimension; ++i)
        fn.minimizer[i] = static_cast<double>(i + 1) * (dimension - i);
      break;
    }
    case FunctionId::NesterovF1:
    case FunctionId::NesterovF2:
      fn.minimizer = Vector::Ones(dimension);
      break;
    default:
      fn.minimizer = Vector::Zero(dimension);
      break;
  }
  return fn;
}

double BenchmarkFunction::evaluate_true(const Vector& x) const {
  check_dimension(*this, x);
  return arcma::evaluate_true(id, x);
}

Vector true_gradient(FunctionId id, const Vector& x) {
  const int d = static_cast<int>(x.size());
  Vector g(d);
  switch (id) {
    case FunctionId::Sphere:
      return 2.0 * x;
    case FunctionId::Ellipsoid:
      for (int i = 0; i < d; ++i) g[i] = 2.0 * ellipsoid_coeff(i, d) * x[i];
      return g;
    case FunctionId::RotatedEllipsoid:
      for (int i = 0; i < d; ++i) g[i] = 2.0 * ellipsoid_coeff(d - 1 - i, d) * x[i];
      return g;
    case FunctionId::HyperEllipsoid:
      for (int i = 0; i < d; ++i) g[i] = 2.0 * (i + 1) * x[i];
      return g;
    case FunctionId::RotatedHyperEllipsoid:
      for (int i = 0; i < d; ++i) g[i] = 2.0 * (d - i) * x[i];
      return g;
    case FunctionId::Rastrigin:
      for (int i = 0; i < d; ++i)
        g[i] = 2.0 * x[i] + 20.0 * kPi * std::sin(2.0 * kPi * x[i]);
      return g;
    case FunctionId::Trid:
      for (int i = 0; i < d; ++i) {
        g[i] = 2.0 * (x[i] - 1.0);
        if (i > 0) g[i] -= x[i - 1];
        if (i + 1 < d) g[i] -= x[i + 1];
      }
      return g;
    case FunctionId::CosineMixture:
      for (int i = 0; i < d; ++i)
        g[i] = 2.0 * x[i] + 0.5 * kPi * std::sin(5.0 * kPi * x[i]);
      return g;
    case FunctionId::Bohachevsky:
      g.setZero();
      for (int i = 0; i + 1 < d; ++i) {
        g[i] += 2.0 * x[i] + 0.9 * kPi * std::sin(3.0 * kPi * x[i]);
        g[i + 1] += 4.0 * x[i + 1] + 1.6 * kPi * std::sin(4.0 * kPi * x[i + 1]);
      }
      return g;
    case FunctionId::Schwefel02: {
      // L = ||S x||^2 with S the lower-triangular all-ones matrix, so the
      // gradient is 2 S^T S x: suffix sums of prefix sums.
      Vector prefix(d);
      double acc = 0.0;
      for (int i = 0; i < d; ++i) {
        acc += x[i];
        prefix[i] = acc;
      }
      double suffix = 0.0;
      for (int i = d - 1; i >= 0; --i) {
        suffix += prefix[i];
        g[i] = 2.0 * suffix;
      }
      return g;
    }
    default:
      throw std::invalid_argument("true_gradient: " + to_string(id) +
                                  " is not differentiable everywhere");
  }
}

double gradient_lipschitz_constant(FunctionId id, int dimension) {
  const double d = dimension;
  switch (id) {
    case FunctionId::Sphere:
      return 2.0;
    case FunctionId::Ellipsoid:
    case FunctionId::RotatedEllipsoid:
      return dimension == 1 ? 2.0 : 200.0;
    case FunctionId::HyperEllipsoid:
    case FunctionId::RotatedHyperEllipsoid:
      return 2.0 * d;
    case FunctionId::Rastrigin:
      return 2.0 + 40.0 * kPi * kPi;
    case FunctionId::Trid:
      // top eigenvalue of the tridiagonal (-1, 2, -1) Hessian
      return 2.0 + 2.0 * std::cos(kPi / (d + 1.0));
    case FunctionId::CosineMixture:
      return 2.0 + 2.5 * kPi * kPi;
    case FunctionId::Bohachevsky: {
      // Hessian is diagonal; coordinate i collects 2 + 2.7 pi^2 from its own
      // term and 4 + 6.4 pi^2 from the preceding one.
      if (dimension == 2) return 4.0 + 6.4 * kPi * kPi;
      return 6.0 + 9.1 * kPi * kPi;
    }
    case FunctionId::Schwefel02: {
      // ||2 S^T S||_2 via the eigenvalues of S^T S
      Matrix s = Matrix::Zero(dimension, dimension);
      for (int i = 0; i < dimension; ++i)
        for (int j = 0; j <= i; ++j) s(i, j) = 1.0;
      Eigen::SelfAdjointEigenSolver<Matrix> eig(s.transpose() * s);
      return 2.0 * eig.eigenvalues().maxCoeff();
    }
    default:
      throw std::invalid_argument("gradient_lipschitz_constant: " + to_string(id) +
                                  " has no Lipschitz continuous gradient");
  }
}

NoisyOracle::NoisyOracle(BenchmarkFunction target, double tau, long long budget_total, Rng rng)
    : target_(std::move(target)), tau_(tau), budget_total_(budget_total), rng_(rng) {
  if (tau < 0.0) throw std::invalid_argument("oracle: tau must be nonnegative");
  if (budget_total < 1) throw std::invalid_argument("oracle: budget must be positive");
}

double NoisyOracle::draw_mean(const Vector& x, long long m) {
  const double value = target_.evaluate_true(x);
  if (tau_ == 0.0) return value;
  std::normal_distribution<double> normal(0.0, 1.0);
  double z_sum = 0.0;
  for (long long i = 0; i < m; ++i) z_sum += normal(rng_);
  return value + tau_ * z_sum / static_cast<double>(m);
}

double NoisyOracle::noisy_sample(const Vector& x) {
  if (budget_used_ >= budget_total_) throw BudgetExhausted();
  const double v = draw_mean(x, 1);
  ++budget_used_;
  return v;
}

double NoisyOracle::mean_evaluate(const Vector& x, long long m) {
  if (m < 1) throw std::invalid_argument("mean_evaluate: m must be >= 1");
  if (m > remaining()) throw BudgetExhausted();
  const double v = draw_mean(x, m);
  budget_used_ += m;
  return v;
}

double NoisyOracle::mean_evaluate_uncharged(const Vector& x, long long m) {
  if (m < 1) throw std::invalid_argument("mean_evaluate: m must be >= 1");
  return draw_mean(x, m);
}

}  // namespace arcma
