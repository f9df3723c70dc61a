#pragma once

#include <vector>

#include "wcs/config.hpp"
#include "wcs/simulation.hpp"

namespace wcs {

// Runs cfg.replications seeded copies (seed, seed+1, ...). Artifacts are
// the caller's concern; results come back in replication order.
std::vector<RunResult> run_replicated(const ScenarioConfig& cfg,
                                      int max_threads = 0);

struct SweepPoint {
    double rate_mbps = 0;
    double h_ms = 0;
    double dmr_mean = 0;
    double dmr_std = 0;
};

// Fixed-period DMR surface: for each (rate, period) grid point, runs
// `replications` seeded simulations with the feedback scheduler disabled
// and reports the arithmetic mean (and stddev) of the per-run DMR.
std::vector<SweepPoint> sweep(const ScenarioConfig& base,
                              const std::vector<double>& rates_mbps,
                              const std::vector<double>& periods_ms,
                              int replications, int max_threads = 0);

struct CompareRow {
    SchedulerMode mode = SchedulerMode::None;
    double sum_iae = 0;      // mean across replications
    double executions = 0;   // mean across replications
};

// Same seed set across modes, so mode effects are isolated.
std::vector<CompareRow> compare(const ScenarioConfig& base,
                                const std::vector<SchedulerMode>& modes,
                                int max_threads = 0);

}  // namespace wcs
