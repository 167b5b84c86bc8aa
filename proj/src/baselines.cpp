#include "arcma/baselines.hpp"

#include <cmath>

namespace arcma {

namespace {

enum class StepStatus { Ok, OutOfBudget };

// One atomic standard-CMA-ES iteration at a fixed re-evaluation count.
StepStatus baseline_iteration(NoisyOracle& oracle, EsState& state, long long reevals) {
  if (static_cast<long long>(state.lambda) * reevals > oracle.remaining())
    return StepStatus::OutOfBudget;
  auto candidates = sample_population(state);
  for (auto& cand : candidates) cand.mean_value = oracle.mean_evaluate(cand.x, reevals);
  const Vector weights = ranked_recombination_weights(candidates, state.mu);
  recombine_mean(state, weights, candidates);
  adapt(state, weights, candidates);
  return StepStatus::Ok;
}

void append_log(NoisyOracle& oracle, const EsState& state, long long reevals,
                std::vector<IterationLog>& logs) {
  IterationLog row;
  row.iteration = state.iteration;
  row.budget_used = oracle.budget_used();
  row.true_error = oracle.target().evaluate_true(state.mean) - oracle.target().optimum_value;
  row.sigma = state.sigma;
  row.reevals = static_cast<double>(reevals);
  row.s_max = state.s_max;
  logs.push_back(row);
}

void maybe_log(NoisyOracle& oracle, const EsState& state, long long reevals, long log_every,
               std::vector<IterationLog>& logs) {
  if (log_every <= 1 || state.iteration % log_every == 0)
    append_log(oracle, state, reevals, logs);
}

void ensure_final_row(NoisyOracle& oracle, const EsState& state, long long reevals,
                      std::vector<IterationLog>& logs) {
  if (state.iteration > 0 && (logs.empty() || logs.back().iteration != state.iteration))
    append_log(oracle, state, reevals, logs);
}

}  // namespace

long long StageSchedule::total_evaluations() const {
  long long total = 0;
  for (const auto& stage : stages) total += stage.candidates * stage.reevals;
  return total;
}

StageSchedule three_stage_schedule(long long budget_total, std::array<long long, 3> reevals,
                                   std::array<long long, 3> candidate_ratio) {
  long long unit_cost = 0;
  for (int j = 0; j < 3; ++j) {
    if (reevals[j] < 1 || candidate_ratio[j] < 0)
      throw std::invalid_argument("three_stage_schedule: invalid stage parameters");
    unit_cost += candidate_ratio[j] * reevals[j];
  }
  if (unit_cost < 1) throw std::invalid_argument("three_stage_schedule: empty schedule");
  const long long unit = budget_total / unit_cost;
  if (unit < 1)
    throw std::invalid_argument("three_stage_schedule: budget below one schedule unit (" +
                                std::to_string(unit_cost) + ")");
  StageSchedule schedule;
  for (int j = 0; j < 3; ++j)
    schedule.stages[j] = {candidate_ratio[j] * unit, reevals[j]};
  return schedule;
}

TerminalReason fixed_reevals_run(NoisyOracle& oracle, EsState& state, long long reevals,
                                 std::vector<IterationLog>& logs, long log_every) {
  if (reevals < 1) throw std::invalid_argument("fixed_reevals_run: reevals must be >= 1");
  while (baseline_iteration(oracle, state, reevals) == StepStatus::Ok)
    maybe_log(oracle, state, reevals, log_every, logs);
  ensure_final_row(oracle, state, reevals, logs);
  return TerminalReason::Budget;
}

TerminalReason three_stage_run(NoisyOracle& oracle, EsState& state,
                               const StageSchedule& schedule, std::vector<IterationLog>& logs,
                               long log_every) {
  long long evaluated = 0;  // candidates consumed so far
  long long last_reevals = 1;
  while (true) {
    long long cumulative = 0;
    const StageSchedule::Stage* current = nullptr;
    for (const auto& stage : schedule.stages) {
      cumulative += stage.candidates;
      if (evaluated < cumulative) {
        current = &stage;
        break;
      }
    }
    if (!current) {
      ensure_final_row(oracle, state, last_reevals, logs);
      return TerminalReason::ScheduleComplete;
    }
    last_reevals = current->reevals;
    if (baseline_iteration(oracle, state, current->reevals) == StepStatus::OutOfBudget) {
      ensure_final_row(oracle, state, last_reevals, logs);
      return TerminalReason::Budget;
    }
    evaluated += state.lambda;
    maybe_log(oracle, state, current->reevals, log_every, logs);
  }
}

}  // namespace arcma
