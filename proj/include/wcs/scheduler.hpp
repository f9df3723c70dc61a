#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wcs/sim_time.hpp"

namespace wcs {

enum class SchedulerMode { None, TimeTriggered, EventTriggered };
const char* scheduler_mode_name(SchedulerMode m);

// Per-rate lookup table (Mb/s -> value). Rates are matched exactly against
// the four 802.11b levels.
class RateTable {
  public:
    RateTable() = default;
    explicit RateTable(std::vector<std::pair<double, double>> entries)
        : entries_(std::move(entries)) {}

    void set(double rate, double value);
    // Throws ConfigError when the rate has no entry.
    double lookup(double rate) const;
    bool contains(double rate) const;
    const std::vector<std::pair<double, double>>& entries() const {
        return entries_;
    }

    bool operator==(const RateTable&) const = default;

  private:
    std::vector<std::pair<double, double>> entries_;
};

struct SchedulerConfig {
    SchedulerMode mode = SchedulerMode::None;
    SimTime detector_period = 500 * kMicrosPerMilli;  // T_ED
    SimTime invocation_period = 500 * kMicrosPerMilli;  // T_FS
    double delta = 0.03;          // event trigger threshold
    RateTable k0_for_rate{{{11.0, 0.018}, {5.5, 0.008}}};
    RateTable setpoint_table{{{11.0, 0.05}, {5.5, 0.10}}};
    double drho_plus = 0.1;
    double drho_minus = 0.08;
    double h0 = 0.015;            // seconds
    double h_min = 0.002;
    double h_max = 0.050;

    void validate() const;  // throws ConfigError

    bool operator==(const SchedulerConfig&) const = default;
};

// Deadline outcomes whose deadlines expired since the previous detector
// tick (tumbling window).
struct DmrWindow {
    std::uint64_t met = 0;
    std::uint64_t missed = 0;

    void record(bool was_met) { was_met ? ++met : ++missed; }
    void reset() { met = 0; missed = 0; }
    std::uint64_t total() const { return met + missed; }
};

// missed / (met + missed); empty window yields no sample and the detector
// tick is skipped (counts carry forward).
std::optional<double> measure_dmr(const DmrWindow& w);

// DMR setpoint as a function of the transmission rate.
double setpoint_for_rate(double rate, const RateTable& table);

// Piecewise gain adaptation around the setpoint band.
double adapt_gain(double rho, double rho_r, double k0, double drho_plus,
                  double drho_minus);

// Proportional period update, clamped to [h_min, h_max]. K carries units of
// seconds per unit DMR error.
double compute_period(double h_prev, double k, double e, double h_min,
                      double h_max);

// Execution-request condition: |rho - rho_r| >= delta (inclusive).
bool detect_event(double rho, double rho_r, double delta);

// Operating point shared by all loops.
struct SchedulerState {
    double h = 0.015;        // seconds
    double k0 = 0.018;
    double rho_r = 0.05;
    double rate = 11.0;      // last observed rate
    std::uint64_t executions = 0;
    double last_k = 0.0;     // gain used on the most recent run
};

SchedulerState initial_scheduler_state(const SchedulerConfig& cfg,
                                       double initial_rate);

// One full scheduler pass: refresh K0 and rho_r if the rate changed, adapt
// K, update h, bump the execution counter. Pure function of (state, rho,
// rate, cfg).
SchedulerState scheduler_run(const SchedulerState& state, double rho,
                             double rate, const SchedulerConfig& cfg);

}  // namespace wcs
