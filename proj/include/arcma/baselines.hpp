#pragma once

#include <array>
#include <vector>

#include "arcma/benchmarks.hpp"
#include "arcma/es_core.hpp"
#include "arcma/run_log.hpp"

namespace arcma {

/// Static three-stage re-evaluation schedule. Counts are candidates, not
/// evaluations: with the default 10:3:1 ratio and M = 100/1000/10000 a 1e7
/// budget yields (7140, 2142, 714) candidates per stage.
struct StageSchedule {
  struct Stage {
    long long candidates = 0;
    long long reevals = 0;
  };
  std::array<Stage, 3> stages;

  long long total_evaluations() const;
};

StageSchedule three_stage_schedule(long long budget_total,
                                   std::array<long long, 3> reevals = {100, 1000, 10000},
                                   std::array<long long, 3> candidate_ratio = {10, 3, 1});

/// Standard CMA-ES loop (top-mu log-decreasing weights) with every candidate
/// averaged over a fixed number of draws. Iterations are atomic: the run
/// stops before an iteration it cannot pay for. Appends one row per
/// log_every iterations plus the final one.
TerminalReason fixed_reevals_run(NoisyOracle& oracle, EsState& state, long long reevals,
                                 std::vector<IterationLog>& logs, long log_every = 1);

/// Same loop with the re-evaluation count stepping through the schedule;
/// stage boundaries are counted in candidates evaluated.
TerminalReason three_stage_run(NoisyOracle& oracle, EsState& state,
                               const StageSchedule& schedule, std::vector<IterationLog>& logs,
                               long log_every = 1);

}  // namespace arcma
