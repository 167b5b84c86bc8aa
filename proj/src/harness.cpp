#include "arcma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace arcma {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void check_known_keys(const json& j, const std::set<std::string>& known,
                      const std::string& prefix, std::vector<std::string>& errors) {
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) errors.push_back(prefix + key + ": unknown field");
}

bool get_integer(const json& j, const std::string& key, const std::string& prefix,
                 std::vector<std::string>& errors, long long& out) {
  if (!j.contains(key)) return false;
  if (!j[key].is_number_integer() && !j[key].is_number_unsigned()) {
    errors.push_back(prefix + key + ": expected an integer");
    return false;
  }
  out = j[key].get<long long>();
  return true;
}

bool get_number(const json& j, const std::string& key, const std::string& prefix,
                std::vector<std::string>& errors, double& out) {
  if (!j.contains(key)) return false;
  if (!j[key].is_number()) {
    errors.push_back(prefix + key + ": expected a number");
    return false;
  }
  out = j[key].get<double>();
  return true;
}

bool get_string(const json& j, const std::string& key, const std::string& prefix,
                std::vector<std::string>& errors, std::string& out) {
  if (!j.contains(key)) return false;
  if (!j[key].is_string()) {
    errors.push_back(prefix + key + ": expected a string");
    return false;
  }
  out = j[key].get<std::string>();
  return true;
}

bool get_bool(const json& j, const std::string& key, const std::string& prefix,
              std::vector<std::string>& errors, bool& out) {
  if (!j.contains(key)) return false;
  if (!j[key].is_boolean()) {
    errors.push_back(prefix + key + ": expected a boolean");
    return false;
  }
  out = j[key].get<bool>();
  return true;
}

void parse_ar_params(const json& j, ArParams& p, std::vector<std::string>& errors) {
  const std::string prefix = "ar.";
  check_known_keys(j,
                   {"alpha", "beta", "m_init", "m_cap_fraction", "charge_mean_reeval",
                    "probabilistic_offset", "offset_c", "gp_noise_variance",
                    "csa_compensation", "probe_fraction", "probe_min", "tau_reading"},
                   prefix, errors);
  get_number(j, "alpha", prefix, errors, p.alpha);
  get_number(j, "beta", prefix, errors, p.beta);
  get_number(j, "m_init", prefix, errors, p.m_init);
  get_number(j, "m_cap_fraction", prefix, errors, p.m_cap_fraction);
  get_bool(j, "charge_mean_reeval", prefix, errors, p.charge_mean_reeval);
  get_bool(j, "probabilistic_offset", prefix, errors, p.probabilistic_offset);
  get_number(j, "offset_c", prefix, errors, p.offset_c);
  get_bool(j, "gp_noise_variance", prefix, errors, p.gp_noise_variance);
  get_string(j, "csa_compensation", prefix, errors, p.csa_compensation);
  get_number(j, "probe_fraction", prefix, errors, p.probe_fraction);
  get_integer(j, "probe_min", prefix, errors, p.probe_min);
  get_string(j, "tau_reading", prefix, errors, p.tau_reading);

  if (!(p.alpha > 0.0 && p.alpha < 1.0)) errors.push_back("ar.alpha: must lie in (0, 1)");
  if (!(p.beta > 0.0 && p.beta < 1.0)) errors.push_back("ar.beta: must lie in (0, 1)");
  if (p.m_init < 1.0) errors.push_back("ar.m_init: must be >= 1");
  if (!(p.m_cap_fraction > 0.0)) errors.push_back("ar.m_cap_fraction: must be positive");
  if (!(p.offset_c > 0.0)) errors.push_back("ar.offset_c: must be positive");
  if (p.csa_compensation != "scale_step" && p.csa_compensation != "halve_norm" &&
      p.csa_compensation != "none")
    errors.push_back("ar.csa_compensation: expected scale_step, halve_norm, or none");
  if (p.probe_fraction < 0.0 || p.probe_fraction > 1.0)
    errors.push_back("ar.probe_fraction: must lie in [0, 1]");
  if (p.probe_min < 0) errors.push_back("ar.probe_min: must be nonnegative");
  if (p.tau_reading != "consistent" && p.tau_reading != "literal")
    errors.push_back("ar.tau_reading: expected consistent or literal");
}

void parse_fixed_params(const json& j, FixedReevalsParams& p, std::vector<std::string>& errors) {
  check_known_keys(j, {"reevals"}, "fixed_m.", errors);
  get_integer(j, "reevals", "fixed_m.", errors, p.reevals);
  if (p.reevals < 1) errors.push_back("fixed_m.reevals: must be >= 1");
}

void parse_three_stage_params(const json& j, ThreeStageParams& p,
                              std::vector<std::string>& errors) {
  check_known_keys(j, {"reevals", "candidate_ratio"}, "three_stage.", errors);
  const auto read_triplet = [&](const char* key, std::array<long long, 3>& out) {
    if (!j.contains(key)) return;
    const auto& arr = j[key];
    if (!arr.is_array() || arr.size() != 3) {
      errors.push_back(std::string("three_stage.") + key + ": expected an array of 3 integers");
      return;
    }
    for (int i = 0; i < 3; ++i) {
      if (!arr[i].is_number_integer() && !arr[i].is_number_unsigned()) {
        errors.push_back(std::string("three_stage.") + key + ": expected integers");
        return;
      }
      out[i] = arr[i].get<long long>();
    }
  };
  read_triplet("reevals", p.reevals);
  read_triplet("candidate_ratio", p.candidate_ratio);
  for (long long r : p.reevals)
    if (r < 1) errors.push_back("three_stage.reevals: entries must be >= 1");
  long long ratio_sum = 0;
  for (long long r : p.candidate_ratio) {
    if (r < 0) errors.push_back("three_stage.candidate_ratio: entries must be >= 0");
    ratio_sum += r;
  }
  if (ratio_sum < 1) errors.push_back("three_stage.candidate_ratio: must not be all zero");
}

void validate_common(RunConfig& cfg, std::vector<std::string>& errors) {
  if (cfg.dimension < 1) errors.push_back("dimension: must be >= 1");
  switch (cfg.function) {
    case FunctionId::Trid:
    case FunctionId::Bohachevsky:
    case FunctionId::Schwefel02:
      if (cfg.dimension < 2)
        errors.push_back("dimension: " + to_string(cfg.function) + " needs dimension >= 2");
      break;
    default:
      break;
  }
  if (cfg.tau_squared != 0.0 && cfg.tau_squared != 1.0 && cfg.tau_squared != 10.0 &&
      cfg.tau_squared != 100.0)
    errors.push_back("tau_squared: must be one of {0, 1, 10, 100}");
  if (cfg.budget < 1) errors.push_back("budget: must be >= 1");
  if (cfg.lambda < 2) errors.push_back("lambda: must be >= 2");
  if (cfg.mu < 1 || cfg.mu > cfg.lambda) errors.push_back("mu: must lie in [1, lambda]");
}

RunConfig parse_run_config(const json& j, std::vector<std::string>& errors) {
  RunConfig cfg;
  check_known_keys(j,
                   {"function", "dimension", "tau_squared", "budget", "method", "lambda", "mu",
                    "seed", "out_dir", "ar", "fixed_m", "three_stage"},
                   "", errors);

  std::string name;
  if (get_string(j, "function", "", errors, name)) {
    try {
      cfg.function = function_id_from_string(name);
    } catch (const std::invalid_argument&) {
      errors.push_back("function: unknown id '" + name + "'");
    }
  } else if (!j.contains("function")) {
    errors.push_back("function: required");
  }

  long long value = 0;
  if (get_integer(j, "dimension", "", errors, value)) cfg.dimension = static_cast<int>(value);
  else if (!j.contains("dimension")) errors.push_back("dimension: required");

  get_number(j, "tau_squared", "", errors, cfg.tau_squared);
  if (get_integer(j, "budget", "", errors, value)) cfg.budget = value;
  else if (!j.contains("budget")) errors.push_back("budget: required");

  if (get_string(j, "method", "", errors, name)) {
    try {
      cfg.method = method_from_string(name);
    } catch (const std::invalid_argument&) {
      errors.push_back("method: unknown method '" + name + "'");
    }
  } else if (!j.contains("method")) {
    errors.push_back("method: required");
  }

  if (get_integer(j, "lambda", "", errors, value)) cfg.lambda = static_cast<int>(value);
  if (get_integer(j, "mu", "", errors, value)) cfg.mu = static_cast<int>(value);
  if (get_integer(j, "seed", "", errors, value)) cfg.seed = static_cast<std::uint64_t>(value);
  get_string(j, "out_dir", "", errors, cfg.out_dir);

  if (j.contains("ar")) parse_ar_params(j["ar"], cfg.ar, errors);
  if (j.contains("fixed_m")) parse_fixed_params(j["fixed_m"], cfg.fixed_m, errors);
  if (j.contains("three_stage")) parse_three_stage_params(j["three_stage"], cfg.three_stage, errors);

  validate_common(cfg, errors);
  return cfg;
}

json config_to_json_object(const RunConfig& cfg) {
  json j;
  j["function"] = to_string(cfg.function);
  j["dimension"] = cfg.dimension;
  j["tau_squared"] = cfg.tau_squared;
  j["budget"] = cfg.budget;
  j["method"] = to_string(cfg.method);
  j["lambda"] = cfg.lambda;
  j["mu"] = cfg.mu;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["ar"] = {{"alpha", cfg.ar.alpha},
             {"beta", cfg.ar.beta},
             {"m_init", cfg.ar.m_init},
             {"m_cap_fraction", cfg.ar.m_cap_fraction},
             {"charge_mean_reeval", cfg.ar.charge_mean_reeval},
             {"probabilistic_offset", cfg.ar.probabilistic_offset},
             {"offset_c", cfg.ar.offset_c},
             {"gp_noise_variance", cfg.ar.gp_noise_variance},
             {"csa_compensation", cfg.ar.csa_compensation},
             {"probe_fraction", cfg.ar.probe_fraction},
             {"probe_min", cfg.ar.probe_min},
             {"tau_reading", cfg.ar.tau_reading}};
  j["fixed_m"] = {{"reevals", cfg.fixed_m.reevals}};
  j["three_stage"] = {
      {"reevals", cfg.three_stage.reevals},
      {"candidate_ratio", cfg.three_stage.candidate_ratio}};
  return j;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

std::string log_rows_to_csv(const std::vector<IterationLog>& rows) {
  std::string text = "iter,budget,true_error,sigma,M,s_max,k_hat,g_norm,A,a,b\n";
  for (const auto& r : rows) {
    text += std::to_string(r.iteration) + ',' + std::to_string(r.budget_used) + ',' +
            format_double(r.true_error) + ',' + format_double(r.sigma) + ',' +
            format_short(r.reevals) + ',' + format_double(r.s_max) + ',' +
            format_double(r.k_hat) + ',' + format_double(r.g_norm) + ',' +
            format_double(r.offset) + ',' + format_double(r.bound_a) + ',' +
            format_double(r.bound_b) + '\n';
  }
  return text;
}

CsaCompensation csa_from_string(const std::string& name) {
  if (name == "scale_step") return CsaCompensation::ScaleStep;
  if (name == "halve_norm") return CsaCompensation::HalveNorm;
  if (name == "none") return CsaCompensation::None;
  throw std::invalid_argument("unknown csa compensation: " + name);
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::AdaptiveReevals: return "ar";
    case Method::FixedReevals: return "fixed_m";
    case Method::ThreeStage: return "three_stage";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "ar") return Method::AdaptiveReevals;
  if (name == "fixed_m") return Method::FixedReevals;
  if (name == "three_stage") return Method::ThreeStage;
  throw std::invalid_argument("unknown method: " + name);
}

std::string RunConfig::name() const {
  return to_string(method) + "_" + to_string(function) + "_d" + std::to_string(dimension) +
         "_tau2_" + format_short(tau_squared) + "_B" + std::to_string(budget) + "_seed" +
         std::to_string(seed);
}

RunConfig run_config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  std::vector<std::string> errors;
  RunConfig cfg = parse_run_config(j, errors);
  if (!errors.empty()) {
    std::string joined = "invalid config:";
    for (const auto& line : errors) joined += "\n  " + line;
    throw std::invalid_argument(joined);
  }
  return cfg;
}

std::vector<std::string> validate_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    return {std::string("config: invalid JSON: ") + e.what()};
  }
  std::vector<std::string> errors;
  parse_run_config(j, errors);
  return errors;
}

std::string run_config_to_json(const RunConfig& config) {
  return config_to_json_object(config).dump(2);
}

RunRecord run(const RunConfig& config) {
  std::vector<std::string> errors;
  {
    RunConfig copy = config;
    validate_common(copy, errors);
  }
  if (!errors.empty()) {
    std::string joined = "invalid config:";
    for (const auto& line : errors) joined += "\n  " + line;
    throw std::invalid_argument(joined);
  }

  const BenchmarkFunction fn = make_function(config.function, config.dimension);
  const double tau = std::sqrt(config.tau_squared);
  NoisyOracle oracle(fn, tau, config.budget, make_rng(config.seed, 0));
  EsState state = init_state(fn.space, config.lambda, config.mu, stream_seed(config.seed, 1));

  RunRecord record;
  record.config = config;

  switch (config.method) {
    case Method::AdaptiveReevals: {
      Rng probe_rng = make_rng(config.seed, 2);
      Rng estimator_rng = make_rng(config.seed, 3);
      ProbeConfig probe_cfg;
      probe_cfg.budget_fraction = config.ar.probe_fraction;
      probe_cfg.min_budget = config.ar.probe_min;
      probe_cfg.reading = config.ar.tau_reading == "literal" ? TauReading::Literal
                                                             : TauReading::Consistent;
      const ProbeResult probe = run_noise_probe(oracle, fn.space, probe_rng, probe_cfg);
      record.tau_hat = probe.tau_hat;
      record.probe_spent = probe.spent;

      ArOptions opts;
      opts.alpha = config.ar.alpha;
      opts.beta = config.ar.beta;
      opts.m_init = config.ar.m_init;
      opts.m_cap = std::max(1.0, config.ar.m_cap_fraction * static_cast<double>(config.budget));
      opts.charge_mean_reeval = config.ar.charge_mean_reeval;
      opts.probabilistic_offset = config.ar.probabilistic_offset;
      opts.offset_c = config.ar.offset_c;
      opts.gp_noise_variance = config.ar.gp_noise_variance;
      opts.csa = csa_from_string(config.ar.csa_compensation);
      ArController ctrl = ArController::make(config.dimension, probe.tau_hat, opts);
      record.terminal_reason =
          to_string(ar_run(oracle, state, ctrl, estimator_rng, record.rows));
      break;
    }
    case Method::FixedReevals:
      record.terminal_reason = to_string(
          fixed_reevals_run(oracle, state, config.fixed_m.reevals, record.rows, 10));
      break;
    case Method::ThreeStage: {
      const StageSchedule schedule = three_stage_schedule(
          config.budget, config.three_stage.reevals, config.three_stage.candidate_ratio);
      record.terminal_reason =
          to_string(three_stage_run(oracle, state, schedule, record.rows, 10));
      break;
    }
  }

  record.final_error = fn.evaluate_true(state.mean) - fn.optimum_value;
  record.budget_used = oracle.budget_used();
  record.iterations = state.iteration;
  return record;
}

EcdfCurve compute_ecdf(const std::vector<double>& final_errors) {
  if (final_errors.empty()) throw std::invalid_argument("ecdf: empty input");
  for (double e : final_errors)
    if (!std::isfinite(e)) throw std::invalid_argument("ecdf: errors must be finite");

  std::vector<double> sorted = final_errors;
  std::sort(sorted.begin(), sorted.end());
  EcdfCurve curve;
  const double n = static_cast<double>(sorted.size());
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    curve.errors.push_back(sorted[i]);
    curve.fractions.push_back(static_cast<double>(i + 1) / n);
  }
  return curve;
}

Summary compare(const std::vector<RunRecord>& records) {
  using Key = std::tuple<std::string, std::string, int, double, long long>;
  std::map<Key, std::vector<double>> cells;
  std::map<std::string, std::vector<double>> per_method;
  for (const auto& rec : records) {
    const Key key{to_string(rec.config.method), to_string(rec.config.function),
                  rec.config.dimension, rec.config.tau_squared, rec.config.budget};
    cells[key].push_back(rec.final_error);
    per_method[to_string(rec.config.method)].push_back(rec.final_error);
  }

  Summary summary;
  for (const auto& [key, errors] : cells) {
    SummaryCell cell;
    cell.method = method_from_string(std::get<0>(key));
    cell.function = function_id_from_string(std::get<1>(key));
    cell.dimension = std::get<2>(key);
    cell.tau_squared = std::get<3>(key);
    cell.budget = std::get<4>(key);
    cell.runs = static_cast<int>(errors.size());
    double sum = 0.0;
    for (double e : errors) sum += e;
    cell.mean_error = sum / errors.size();
    if (errors.size() > 1) {
      double ss = 0.0;
      for (double e : errors) ss += (e - cell.mean_error) * (e - cell.mean_error);
      cell.se_error = std::sqrt(ss / (errors.size() - 1) / errors.size());
    }
    cell.median_error = median_of(errors);
    summary.cells.push_back(cell);
  }
  for (const auto& [method, errors] : per_method)
    summary.ecdf_per_method.emplace(method, compute_ecdf(errors));
  return summary;
}

void write_run_record(const RunRecord& record, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string stem = record.config.name();

  json j;
  j["config"] = config_to_json_object(record.config);
  j["final_error"] = record.final_error;
  j["terminal_reason"] = record.terminal_reason;
  j["iterations"] = record.iterations;
  j["budget_used"] = record.budget_used;
  j["tau_hat"] = record.tau_hat;
  j["probe_spent"] = record.probe_spent;
  j["log_csv"] = stem + ".csv";
  write_text_atomic(out_dir / (stem + ".json"), j.dump(2) + "\n");
  write_text_atomic(out_dir / (stem + ".csv"), log_rows_to_csv(record.rows));
}

std::vector<StoredRun> load_stored_runs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<StoredRun> runs;
  for (const auto& path : files) {
    std::ifstream in(path);
    json j;
    try {
      in >> j;
    } catch (const json::parse_error&) {
      continue;
    }
    if (!j.contains("final_error") || !j.contains("config")) continue;
    runs.push_back({j["config"].value("method", std::string("unknown")),
                    j["final_error"].get<double>()});
  }
  return runs;
}

void write_ecdf_csv(const EcdfCurve& curve, const std::filesystem::path& path) {
  std::string text = "error,fraction\n";
  for (size_t i = 0; i < curve.errors.size(); ++i)
    text += format_double(curve.errors[i]) + "," + format_double(curve.fractions[i]) + "\n";
  write_text_atomic(path, text);
}

void write_summary_csv(const Summary& summary, const std::filesystem::path& path) {
  std::string text = "method,function,dimension,tau_squared,budget,runs,mean_error,se_error,median_error\n";
  for (const auto& cell : summary.cells) {
    text += to_string(cell.method) + "," + to_string(cell.function) + "," +
            std::to_string(cell.dimension) + "," + format_short(cell.tau_squared) + "," +
            std::to_string(cell.budget) + "," + std::to_string(cell.runs) + "," +
            format_double(cell.mean_error) + "," + format_double(cell.se_error) + "," +
            format_double(cell.median_error) + "\n";
  }
  write_text_atomic(path, text);
}

void write_efficiency_outputs(const EfficiencyCurve& curve, const std::filesystem::path& out_dir,
                              const std::string& stem) {
  std::filesystem::create_directories(out_dir);
  std::string text = "m,empirical_mean,empirical_se,theoretical\n";
  for (size_t i = 0; i < curve.m_grid.size(); ++i)
    text += std::to_string(curve.m_grid[i]) + "," + format_double(curve.empirical_mean[i]) +
            "," + format_double(curve.empirical_se[i]) + "," +
            format_double(curve.theoretical[i]) + "\n";
  write_text_atomic(out_dir / (stem + ".csv"), text);

  json j;
  j["function"] = to_string(curve.frozen.function);
  j["dimension"] = curve.frozen.dimension;
  j["lambda"] = curve.frozen.lambda;
  j["freeze_iteration"] = curve.frozen.iteration;
  j["sigma"] = curve.frozen.sigma;
  j["offset"] = curve.frozen.offset;
  j["s_max"] = curve.frozen.s_max;
  j["k_true"] = curve.frozen.k_true;
  j["tau"] = curve.frozen.tau;
  j["grad_norm_sq"] = curve.frozen.grad_norm_sq;
  j["a"] = curve.frozen.coeffs.a;
  j["b"] = curve.frozen.coeffs.b;
  j["m_star_theoretical"] = curve.m_star_theoretical;
  j["m_star_empirical"] = curve.m_star_empirical;
  write_text_atomic(out_dir / (stem + ".json"), j.dump(2) + "\n");
}

std::vector<RunConfig> expand_matrix(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("matrix: invalid JSON: ") + e.what());
  }
  std::vector<std::string> errors;
  check_known_keys(j,
                   {"functions", "dimensions", "tau_squared", "budgets", "methods", "seeds",
                    "lambda", "mu", "ar", "fixed_m", "three_stage"},
                   "", errors);

  const auto require_array = [&](const char* key) -> json {
    if (!j.contains(key)) {
      errors.push_back(std::string(key) + ": required");
      return json::array();
    }
    if (!j[key].is_array() || j[key].empty()) {
      errors.push_back(std::string(key) + ": expected a non-empty array");
      return json::array();
    }
    return j[key];
  };

  const json functions = require_array("functions");
  const json dimensions = require_array("dimensions");
  const json taus = require_array("tau_squared");
  const json budgets = require_array("budgets");
  const json methods = require_array("methods");

  std::vector<std::uint64_t> seeds;
  if (!j.contains("seeds")) {
    errors.push_back("seeds: required");
  } else if (j["seeds"].is_number_integer() || j["seeds"].is_number_unsigned()) {
    const long long n = j["seeds"].get<long long>();
    if (n < 1) errors.push_back("seeds: must be >= 1");
    for (long long s = 1; s <= n; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  } else if (j["seeds"].is_array()) {
    for (const auto& s : j["seeds"]) seeds.push_back(s.get<std::uint64_t>());
  } else {
    errors.push_back("seeds: expected an integer count or a list");
  }

  RunConfig base;
  long long value = 0;
  if (get_integer(j, "lambda", "", errors, value)) base.lambda = static_cast<int>(value);
  if (get_integer(j, "mu", "", errors, value)) base.mu = static_cast<int>(value);
  if (j.contains("ar")) parse_ar_params(j["ar"], base.ar, errors);
  if (j.contains("fixed_m")) parse_fixed_params(j["fixed_m"], base.fixed_m, errors);
  if (j.contains("three_stage")) parse_three_stage_params(j["three_stage"], base.three_stage, errors);

  std::vector<RunConfig> configs;
  if (errors.empty()) {
    for (const auto& fn : functions)
      for (const auto& dim : dimensions)
        for (const auto& tau : taus)
          for (const auto& budget : budgets)
            for (const auto& method : methods)
              for (std::uint64_t seed : seeds) {
                RunConfig cfg = base;
                cfg.function = function_id_from_string(fn.get<std::string>());
                cfg.dimension = dim.get<int>();
                cfg.tau_squared = tau.get<double>();
                cfg.budget = budget.get<long long>();
                cfg.method = method_from_string(method.get<std::string>());
                cfg.seed = seed;
                validate_common(cfg, errors);
                configs.push_back(cfg);
              }
  }
  if (!errors.empty()) {
    std::string joined = "invalid matrix config:";
    std::set<std::string> unique(errors.begin(), errors.end());
    for (const auto& line : unique) joined += "\n  " + line;
    throw std::invalid_argument(joined);
  }
  return configs;
}

std::string preset_matrix(const std::string& preset) {
  json j;
  j["functions"] = {"sphere", "ellipsoid", "rotated_ellipsoid", "hyper_ellipsoid",
                    "rotated_hyper_ellipsoid", "rastrigin", "trid", "cosine_mixture",
                    "bohachevsky", "schwefel02"};
  j["tau_squared"] = {1, 10, 100};
  j["methods"] = {"ar", "fixed_m", "three_stage"};
  j["lambda"] = 100;
  j["mu"] = 50;
  if (preset == "desk") {
    j["dimensions"] = {5, 10};
    j["budgets"] = {100000, 1000000, 10000000};
    j["seeds"] = 10;
    j["fixed_m"] = {{"reevals", 100}};
  } else if (preset == "paper") {
    j["dimensions"] = {10, 20};
    j["budgets"] = {10000000, 100000000, 1000000000};
    j["seeds"] = 20;
    j["fixed_m"] = {{"reevals", 10000}};
  } else {
    throw std::invalid_argument("unknown preset: " + preset + " (expected desk or paper)");
  }
  return j.dump(2);
}

Summary run_matrix(const std::vector<RunConfig>& configs, const std::filesystem::path& out_dir,
                   int workers) {
  if (configs.empty()) throw std::invalid_argument("matrix: no runs to execute");
  std::filesystem::create_directories(out_dir);

  std::vector<RunRecord> records(configs.size());
  std::atomic<size_t> next{0};
  std::mutex io_mutex;
  std::vector<std::string> failures;

  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(configs.size())));
  const auto worker = [&]() {
    while (true) {
      const size_t idx = next.fetch_add(1);
      if (idx >= configs.size()) return;
      try {
        RunRecord record = run(configs[idx]);
        write_run_record(record, out_dir);
        record.rows.clear();  // keep only the summary in memory
        records[idx] = std::move(record);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(io_mutex);
        failures.push_back(configs[idx].name() + ": " + e.what());
      }
    }
  };

  std::vector<std::thread> threads;
  for (int i = 0; i < n_workers; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  if (!failures.empty()) {
    std::string joined = "matrix: some runs failed:";
    for (const auto& line : failures) joined += "\n  " + line;
    throw std::runtime_error(joined);
  }

  const Summary summary = compare(records);
  write_summary_csv(summary, out_dir / "summary.csv");
  for (const auto& [method, curve] : summary.ecdf_per_method)
    write_ecdf_csv(curve, out_dir / ("ecdf_" + method + ".csv"));
  return summary;
}

EfficiencySpec efficiency_spec_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("efficiency config: invalid JSON: ") + e.what());
  }
  std::vector<std::string> errors;
  check_known_keys(j,
                   {"function", "dimension", "tau", "lambda", "freeze_iteration", "m_min",
                    "m_max", "grid_points", "trials", "seed"},
                   "", errors);
  EfficiencySpec spec;
  std::string name;
  if (get_string(j, "function", "", errors, name)) {
    try {
      spec.function = function_id_from_string(name);
    } catch (const std::invalid_argument&) {
      errors.push_back("function: unknown id '" + name + "'");
    }
  }
  long long value = 0;
  if (get_integer(j, "dimension", "", errors, value)) spec.dimension = static_cast<int>(value);
  get_number(j, "tau", "", errors, spec.tau);
  if (get_integer(j, "lambda", "", errors, value)) spec.lambda = static_cast<int>(value);
  if (get_integer(j, "freeze_iteration", "", errors, value)) spec.freeze_iteration = value;
  if (get_integer(j, "m_min", "", errors, value)) spec.m_min = value;
  if (get_integer(j, "m_max", "", errors, value)) spec.m_max = value;
  if (get_integer(j, "grid_points", "", errors, value)) spec.grid_points = static_cast<int>(value);
  if (get_integer(j, "trials", "", errors, value)) spec.trials = static_cast<int>(value);
  if (get_integer(j, "seed", "", errors, value)) spec.seed = static_cast<std::uint64_t>(value);

  if (spec.dimension < 1) errors.push_back("dimension: must be >= 1");
  if (spec.tau < 0.0) errors.push_back("tau: must be nonnegative");
  if (spec.lambda < 2) errors.push_back("lambda: must be >= 2");
  if (spec.freeze_iteration < 1) errors.push_back("freeze_iteration: must be >= 1");
  if (spec.m_min < 1 || spec.m_max < spec.m_min) errors.push_back("m_min/m_max: invalid range");
  if (spec.grid_points < 2) errors.push_back("grid_points: must be >= 2");
  if (spec.trials < 2) errors.push_back("trials: must be >= 2");

  if (!errors.empty()) {
    std::string joined = "invalid efficiency config:";
    for (const auto& line : errors) joined += "\n  " + line;
    throw std::invalid_argument(joined);
  }
  return spec;
}

}  // namespace arcma
