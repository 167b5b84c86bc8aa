// Command-line front end: seeded runs, run matrices, ECDF aggregation, and
// the efficiency-bound experiment, all driven by JSON configs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "arcma/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void print_summary(const arcma::Summary& summary) {
  std::printf("%-12s %-24s %3s %6s %12s %5s %13s %13s\n", "method", "function", "d", "tau^2",
              "budget", "runs", "mean_error", "median_error");
  for (const auto& cell : summary.cells)
    std::printf("%-12s %-24s %3d %6g %12lld %5d %13.4e %13.4e\n",
                arcma::to_string(cell.method).c_str(), arcma::to_string(cell.function).c_str(),
                cell.dimension, cell.tau_squared, cell.budget, cell.runs, cell.mean_error,
                cell.median_error);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy black-box optimization experiments (adaptive re-evaluation CMA-ES)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "results";
  std::string preset;
  int workers = 1;
  std::uint64_t seed_override = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "JSON config file");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--workers", workers, "parallel runs")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
  };

  auto* cmd_run = app.add_subcommand("run", "execute one run config");
  add_common(cmd_run, true);

  auto* cmd_matrix = app.add_subcommand("matrix", "expand a matrix config and run every cell");
  add_common(cmd_matrix, false);
  cmd_matrix->add_option("--preset", preset, "built-in matrix: desk or paper");

  auto* cmd_ecdf = app.add_subcommand("ecdf", "aggregate stored run records into ECDF CSVs");
  std::string records_dir;
  cmd_ecdf->add_option("--config", records_dir, "directory holding run-record JSON files")
      ->required();
  cmd_ecdf->add_option("--out", out_dir, "output directory");

  auto* cmd_eff = app.add_subcommand("efficiency", "empirical vs theoretical efficiency curve");
  add_common(cmd_eff, false);

  auto* cmd_validate = app.add_subcommand("validate", "check a run config and report problems");
  cmd_validate->add_option("--config", config_path, "JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      arcma::RunConfig config = arcma::run_config_from_json(read_file(config_path));
      if (seed_set) config.seed = seed_override;
      if (cmd_run->count("--out") > 0) config.out_dir = out_dir;
      const arcma::RunRecord record = arcma::run(config);
      arcma::write_run_record(record, config.out_dir);
      std::printf("%s: final_error=%.6e iterations=%ld budget_used=%lld (%s)\n",
                  config.name().c_str(), record.final_error, record.iterations,
                  record.budget_used, record.terminal_reason.c_str());
    } else if (cmd_matrix->parsed()) {
      std::string matrix_text;
      if (!preset.empty())
        matrix_text = arcma::preset_matrix(preset);
      else if (!config_path.empty())
        matrix_text = read_file(config_path);
      else
        throw std::runtime_error("matrix: pass --config or --preset");
      const auto configs = arcma::expand_matrix(matrix_text);
      std::printf("running %zu configs with %d workers...\n", configs.size(), workers);
      const arcma::Summary summary = arcma::run_matrix(configs, out_dir, workers);
      print_summary(summary);
      std::printf("records, summary.csv and per-method ECDFs written to %s\n", out_dir.c_str());
    } else if (cmd_ecdf->parsed()) {
      const auto runs = arcma::load_stored_runs(records_dir);
      if (runs.empty()) throw std::runtime_error("no run records found in " + records_dir);
      std::map<std::string, std::vector<double>> by_method;
      for (const auto& r : runs) by_method[r.method].push_back(r.final_error);
      std::filesystem::create_directories(out_dir);
      for (const auto& [method, errors] : by_method) {
        const auto curve = arcma::compute_ecdf(errors);
        const auto path = std::filesystem::path(out_dir) / ("ecdf_" + method + ".csv");
        arcma::write_ecdf_csv(curve, path);
        std::printf("%s: %zu runs -> %s\n", method.c_str(), errors.size(), path.c_str());
      }
    } else if (cmd_eff->parsed()) {
      arcma::EfficiencySpec spec;
      if (!config_path.empty()) spec = arcma::efficiency_spec_from_json(read_file(config_path));
      if (seed_set) spec.seed = seed_override;
      const arcma::EfficiencyCurve curve = arcma::simulate_efficiency(spec);
      arcma::write_efficiency_outputs(curve, out_dir);
      std::printf("frozen iteration %ld: sigma=%.4e A=%.4e a=%.4e b=%.4e\n",
                  curve.frozen.iteration, curve.frozen.sigma, curve.frozen.offset,
                  curve.frozen.coeffs.a, curve.frozen.coeffs.b);
      std::printf("M* theoretical=%.2f empirical(grid)=%lld; table written to %s\n",
                  curve.m_star_theoretical, curve.m_star_empirical, out_dir.c_str());
    } else if (cmd_validate->parsed()) {
      const auto errors = arcma::validate_config_text(read_file(config_path));
      if (errors.empty()) {
        std::printf("config ok\n");
      } else {
        for (const auto& line : errors) std::fprintf(stderr, "%s\n", line.c_str());
        return 1;
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
