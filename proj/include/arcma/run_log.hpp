#pragma once

#include <string>
#include <vector>

namespace arcma {

/// One trajectory row. Baseline methods leave the estimator columns at zero.
struct IterationLog {
  long iteration = 0;
  long long budget_used = 0;
  double true_error = 0.0;
  double sigma = 0.0;
  double reevals = 0.0;  // integer M actually used this iteration
  double s_max = 0.0;
  double k_hat = 0.0;
  double g_norm = 0.0;
  double offset = 0.0;  // A
  double bound_a = 0.0;
  double bound_b = 0.0;
};

enum class TerminalReason { Budget, ScheduleComplete, MaxIterations };

std::string to_string(TerminalReason reason);

}  // namespace arcma
