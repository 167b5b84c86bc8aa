#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arcma/ar_strategy.hpp"
#include "arcma/baselines.hpp"
#include "arcma/benchmarks.hpp"
#include "arcma/efficiency_lab.hpp"
#include "arcma/noise_probe.hpp"
#include "arcma/run_log.hpp"

namespace arcma {

enum class Method { AdaptiveReevals, FixedReevals, ThreeStage };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct ArParams {
  double alpha = 0.1;
  double beta = 0.1;
  double m_init = 1.0;
  double m_cap_fraction = 0.01;  // of the total budget
  bool charge_mean_reeval = true;
  bool probabilistic_offset = false;
  double offset_c = 3.0;
  bool gp_noise_variance = false;
  std::string csa_compensation = "none";  // or "scale_step", "halve_norm"
  double probe_fraction = 0.001;
  long long probe_min = 120;
  std::string tau_reading = "consistent";  // or "literal"
};

struct FixedReevalsParams {
  long long reevals = 100;
};

struct ThreeStageParams {
  std::array<long long, 3> reevals = {100, 1000, 10000};
  std::array<long long, 3> candidate_ratio = {10, 3, 1};
};

struct RunConfig {
  FunctionId function = FunctionId::Sphere;
  int dimension = 10;
  double tau_squared = 0.0;  // one of {0, 1, 10, 100}
  long long budget = 0;
  Method method = Method::AdaptiveReevals;
  ArParams ar;
  FixedReevalsParams fixed_m;
  ThreeStageParams three_stage;
  int lambda = 100;
  int mu = 50;
  std::uint64_t seed = 1;
  std::string out_dir = ".";

  /// e.g. "ar_sphere_d10_tau2_1_B1000000_seed7"
  std::string name() const;
};

struct RunRecord {
  RunConfig config;
  std::vector<IterationLog> rows;
  double final_error = 0.0;
  std::string terminal_reason;
  long long budget_used = 0;
  long iterations = 0;
  double tau_hat = 0.0;       // adaptive method only
  long long probe_spent = 0;  // adaptive method only
};

struct EcdfCurve {
  std::vector<double> errors;     // sorted unique thresholds
  std::vector<double> fractions;  // nondecreasing, last = 1
};

RunConfig run_config_from_json(const std::string& json_text);

/// Returns one "field.path: problem" line per violation (empty when valid).
std::vector<std::string> validate_config_text(const std::string& json_text);
std::string run_config_to_json(const RunConfig& config);

/// Executes one seeded run of the configured method. Trajectory rows carry
/// the true error at the mean, which never touches the oracle budget.
RunRecord run(const RunConfig& config);

/// ECDF(x) = #{i : e_i <= x} / N evaluated at the sorted unique errors.
EcdfCurve compute_ecdf(const std::vector<double>& final_errors);

struct SummaryCell {
  Method method;
  FunctionId function;
  int dimension;
  double tau_squared;
  long long budget;
  int runs = 0;
  double mean_error = 0.0;
  double se_error = 0.0;
  double median_error = 0.0;
};

struct Summary {
  std::vector<SummaryCell> cells;
  std::map<std::string, EcdfCurve> ecdf_per_method;  // aggregated across cells
};

/// Per-(method, function, dimension, noise, budget) statistics plus the
/// aggregated per-method ECDF over all runs.
Summary compare(const std::vector<RunRecord>& records);

/// Writes <out>/<name>.json and <out>/<name>.csv atomically.
void write_run_record(const RunRecord& record, const std::filesystem::path& out_dir);

/// Minimal view of a stored record, for aggregation.
struct StoredRun {
  std::string method;
  double final_error;
};
std::vector<StoredRun> load_stored_runs(const std::filesystem::path& dir);

void write_ecdf_csv(const EcdfCurve& curve, const std::filesystem::path& path);
void write_summary_csv(const Summary& summary, const std::filesystem::path& path);
void write_efficiency_outputs(const EfficiencyCurve& curve,
                              const std::filesystem::path& out_dir,
                              const std::string& stem = "efficiency");

/// Expands a matrix config (lists of functions, dimensions, noise levels,
/// budgets, methods, seeds) into individual run configs.
std::vector<RunConfig> expand_matrix(const std::string& json_text);

/// Built-in matrices: "desk" (budgets 1e5..1e7, d in {5, 10}, 10 seeds) and
/// "paper" (budgets 1e7..1e9, d in {10, 20}, 20 seeds).
std::string preset_matrix(const std::string& preset);

/// Runs configs across a small worker pool; records land in out_dir together
/// with summary.csv and one aggregated ECDF CSV per method.
Summary run_matrix(const std::vector<RunConfig>& configs, const std::filesystem::path& out_dir,
                   int workers);

EfficiencySpec efficiency_spec_from_json(const std::string& json_text);

}  // namespace arcma
