#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "wcs/sim_time.hpp"

namespace wcs {

struct WindowPoint {
    SimTime t = 0;   // detector tick time
    double rho = 0;  // window deadline-miss ratio
    std::uint64_t met = 0;
    std::uint64_t missed = 0;
};

struct MetricsReport {
    std::vector<double> iae;        // per loop
    double sum_iae = 0.0;
    std::uint64_t samples_met = 0;
    std::uint64_t samples_missed = 0;
    double dmr_overall = 0.0;       // missed / total over the whole run
    double dmr_window_mean = 0.0;
    double dmr_window_max = 0.0;
    std::vector<WindowPoint> windows;
    std::uint64_t scheduler_executions = 0;
    double final_h = 0.0;           // seconds
    bool unstable = false;
    double max_abs_y = 0.0;
    SimTime duration = 0;

    void write_csv(std::ostream& os) const;
    void write_summary(std::ostream& os) const;
};

// Single-run accumulator. IAE is integrated by trapezoid on the plant
// sub-step grid; instability is declared when |y| exceeds 100x the
// reference amplitude at any point.
class Metrics {
  public:
    Metrics(int n_loops, double reference_amplitude);

    void accumulate_iae(int loop_id, double ref, double y_begin, double y_end,
                        double dt_seconds);
    void record_sample(bool met);
    void record_window(SimTime t, std::uint64_t met, std::uint64_t missed);
    void record_execution() { ++executions_; }

    std::uint64_t samples_met() const { return met_; }
    std::uint64_t samples_missed() const { return missed_; }

    MetricsReport finalize(SimTime duration, double final_h) const;

  private:
    std::vector<double> iae_;
    double divergence_bound_;
    double max_abs_y_ = 0.0;
    std::uint64_t met_ = 0;
    std::uint64_t missed_ = 0;
    std::vector<WindowPoint> windows_;
    std::uint64_t executions_ = 0;
};

// Cross-seed reduction for replicated runs.
struct ReplicationSummary {
    double sum_iae_mean = 0.0;
    double sum_iae_std = 0.0;
    double dmr_mean = 0.0;
    double dmr_std = 0.0;
};
ReplicationSummary summarize(const std::vector<MetricsReport>& reports);

}  // namespace wcs
