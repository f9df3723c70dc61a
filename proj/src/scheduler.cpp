#include "wcs/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcs/errors.hpp"

namespace wcs {

const char* scheduler_mode_name(SchedulerMode m) {
    switch (m) {
        case SchedulerMode::None: return "none";
        case SchedulerMode::TimeTriggered: return "time_triggered";
        case SchedulerMode::EventTriggered: return "event_triggered";
    }
    return "unknown";
}

void RateTable::set(double rate, double value) {
    for (auto& [r, v] : entries_) {
        if (r == rate) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(rate, value);
}

bool RateTable::contains(double rate) const {
    for (const auto& [r, v] : entries_)
        if (r == rate) return true;
    return false;
}

double RateTable::lookup(double rate) const {
    for (const auto& [r, v] : entries_)
        if (r == rate) return v;
    throw ConfigError("no table entry for rate " + std::to_string(rate) +
                      " Mb/s");
}

void SchedulerConfig::validate() const {
    if (delta < 0.0) throw ConfigError("delta must be >= 0");
    if (drho_plus <= 0.0 || drho_minus <= 0.0)
        throw ConfigError("drho_plus and drho_minus must be > 0");
    if (!(h_min > 0.0 && h_min < h0 && h0 <= h_max))
        throw ConfigError("requires 0 < h_min < h0 <= h_max");
    if (detector_period == 0 || invocation_period == 0)
        throw ConfigError("detector/invocation periods must be positive");
    for (const auto& [r, rho] : setpoint_table.entries())
        if (!(rho > 0.0 && rho < 1.0))
            throw ConfigError("setpoints must lie in (0, 1)");
}

std::optional<double> measure_dmr(const DmrWindow& w) {
    if (w.total() == 0) return std::nullopt;
    return static_cast<double>(w.missed) / static_cast<double>(w.total());
}

double setpoint_for_rate(double rate, const RateTable& table) {
    return table.lookup(rate);
}

double adapt_gain(double rho, double rho_r, double k0, double drho_plus,
                  double drho_minus) {
    if (rho > rho_r + drho_plus) return k0 / 2.0;
    if (rho < rho_r - drho_minus) return 2.0 * k0;
    return k0;
}

double compute_period(double h_prev, double k, double e, double h_min,
                      double h_max) {
    return std::clamp(h_prev + k * e, h_min, h_max);
}

bool detect_event(double rho, double rho_r, double delta) {
    return std::abs(rho - rho_r) >= delta;
}

SchedulerState initial_scheduler_state(const SchedulerConfig& cfg,
                                       double initial_rate) {
    SchedulerState s;
    s.h = cfg.h0;
    s.rate = initial_rate;
    s.k0 = cfg.k0_for_rate.lookup(initial_rate);
    s.rho_r = setpoint_for_rate(initial_rate, cfg.setpoint_table);
    return s;
}

SchedulerState scheduler_run(const SchedulerState& state, double rho,
                             double rate, const SchedulerConfig& cfg) {
    SchedulerState s = state;
    if (rate != s.rate) {
        s.k0 = cfg.k0_for_rate.lookup(rate);
        s.rho_r = setpoint_for_rate(rate, cfg.setpoint_table);
        s.rate = rate;
    }
    const double k = adapt_gain(rho, s.rho_r, s.k0, cfg.drho_plus,
                                cfg.drho_minus);
    const double e = rho - s.rho_r;
    s.h = compute_period(s.h, k, e, cfg.h_min, cfg.h_max);
    s.last_k = k;
    ++s.executions;
    return s;
}

}  // namespace wcs
