#pragma once

#include <cstdint>
#include <string>

#include "arcma/types.hpp"

namespace arcma {

/// The benchmark suite: ten smooth functions plus four non-smooth ones.
enum class FunctionId {
  Sphere,
  Ellipsoid,
  RotatedEllipsoid,
  HyperEllipsoid,
  RotatedHyperEllipsoid,
  Rastrigin,
  Trid,
  CosineMixture,
  Bohachevsky,
  Schwefel02,
  SumAbsolute,
  NesterovF1,
  NesterovF2,
  GriewankNonsmooth,
};

/// Canonical snake_case name used in configs and result files.
std::string to_string(FunctionId id);
FunctionId function_id_from_string(const std::string& name);

bool is_smooth(FunctionId id);

/// Axis-aligned box used for initialization only; objective functions are
/// total on R^d and candidates are never clipped.
struct SearchSpace {
  Vector lower;
  Vector upper;

  int dimension() const { return static_cast<int>(lower.size()); }
  void validate() const;
};

struct BenchmarkFunction {
  FunctionId id;
  int dimension = 0;
  SearchSpace space;
  double optimum_value = 0.0;  // L* = L(minimizer)
  Vector minimizer;

  double evaluate_true(const Vector& x) const;
};

/// Builds the named function at dimension d with its tabulated search space,
/// known minimizer and optimum value.
BenchmarkFunction make_function(FunctionId id, int dimension);

double evaluate_true(FunctionId id, const Vector& x);

/// L* for the named function; Trid's optimum is -d(d+4)(d-1)/6.
double optimum_value(FunctionId id, int dimension);

/// Analytic gradient of a smooth benchmark function (throws for the
/// non-smooth ones).
Vector true_gradient(FunctionId id, const Vector& x);

/// Exact Lipschitz constant of the gradient over R^d for the smooth
/// functions (the max spectral norm of the Hessian).
double gradient_lipschitz_constant(FunctionId id, int dimension);

/// Budget-metered evaluator returning L(x) + tau * N(0,1). The only path to
/// function values during optimization; true values for reporting bypass it.
class NoisyOracle {
 public:
  NoisyOracle(BenchmarkFunction target, double tau, long long budget_total, Rng rng);

  /// One noisy draw; charges 1 evaluation.
  double noisy_sample(const Vector& x);

  /// Average of m noisy draws; charges m, all-or-nothing: throws
  /// BudgetExhausted before any draw if m exceeds the remaining budget.
  double mean_evaluate(const Vector& x, long long m);

  /// Same draw semantics as mean_evaluate but does not touch the budget.
  /// Exists to replicate accounting schemes that do not charge the
  /// reference-point re-evaluations.
  double mean_evaluate_uncharged(const Vector& x, long long m);

  const BenchmarkFunction& target() const { return target_; }
  double tau() const { return tau_; }
  long long budget_total() const { return budget_total_; }
  long long budget_used() const { return budget_used_; }
  long long remaining() const { return budget_total_ - budget_used_; }

 private:
  double draw_mean(const Vector& x, long long m);

  BenchmarkFunction target_;
  double tau_;
  long long budget_total_;
  long long budget_used_ = 0;
  Rng rng_;
};

}  // namespace arcma
