#include "wcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wcs/errors.hpp"

namespace wcs {

Metrics::Metrics(int n_loops, double reference_amplitude)
    : iae_(n_loops, 0.0), divergence_bound_(100.0 * reference_amplitude) {}

void Metrics::accumulate_iae(int loop_id, double ref, double y_begin,
                             double y_end, double dt_seconds) {
    if (!(dt_seconds > 0.0)) throw SimFault("accumulate_iae: dt must be > 0");
    iae_[loop_id] +=
        0.5 * (std::abs(ref - y_begin) + std::abs(ref - y_end)) * dt_seconds;
    max_abs_y_ = std::max({max_abs_y_, std::abs(y_begin), std::abs(y_end)});
}

void Metrics::record_sample(bool met) { met ? ++met_ : ++missed_; }

void Metrics::record_window(SimTime t, std::uint64_t met,
                            std::uint64_t missed) {
    WindowPoint p;
    p.t = t;
    p.met = met;
    p.missed = missed;
    p.rho = static_cast<double>(missed) / static_cast<double>(met + missed);
    windows_.push_back(p);
}

MetricsReport Metrics::finalize(SimTime duration, double final_h) const {
    MetricsReport r;
    r.iae = iae_;
    r.sum_iae = std::accumulate(iae_.begin(), iae_.end(), 0.0);
    r.samples_met = met_;
    r.samples_missed = missed_;
    const std::uint64_t total = met_ + missed_;
    r.dmr_overall =
        total ? static_cast<double>(missed_) / static_cast<double>(total) : 0.0;
    r.windows = windows_;
    if (!windows_.empty()) {
        double sum = 0.0, mx = 0.0;
        for (const auto& w : windows_) {
            sum += w.rho;
            mx = std::max(mx, w.rho);
        }
        r.dmr_window_mean = sum / static_cast<double>(windows_.size());
        r.dmr_window_max = mx;
    }
    r.scheduler_executions = executions_;
    r.final_h = final_h;
    r.max_abs_y = max_abs_y_;
    r.unstable = max_abs_y_ > divergence_bound_;
    r.duration = duration;
    return r;
}

void MetricsReport::write_csv(std::ostream& os) const {
    os << "metric,value\n";
    for (std::size_t i = 0; i < iae.size(); ++i)
        os << "iae_loop" << i << "," << iae[i] << "\n";
    os << "sum_iae," << sum_iae << "\n"
       << "samples_met," << samples_met << "\n"
       << "samples_missed," << samples_missed << "\n"
       << "dmr_overall," << dmr_overall << "\n"
       << "dmr_window_mean," << dmr_window_mean << "\n"
       << "dmr_window_max," << dmr_window_max << "\n"
       << "scheduler_executions," << scheduler_executions << "\n"
       << "final_h_us," << static_cast<SimTime>(final_h * 1e6 + 0.5) << "\n"
       << "max_abs_y," << max_abs_y << "\n"
       << "unstable," << (unstable ? 1 : 0) << "\n"
       << "duration_us," << duration << "\n";
}

void MetricsReport::write_summary(std::ostream& os) const {
    os << "duration: " << to_seconds(duration) << " s\n";
    os << "sum IAE: " << sum_iae << " (per loop:";
    for (double v : iae) os << " " << v;
    os << ")\n";
    os << "samples: " << samples_met << " met, " << samples_missed
       << " missed (DMR " << dmr_overall << ")\n";
    os << "window DMR: mean " << dmr_window_mean << ", max " << dmr_window_max
       << " over " << windows.size() << " windows\n";
    os << "scheduler executions: " << scheduler_executions << "\n";
    os << "final sampling period: " << final_h * 1e3 << " ms\n";
    os << "stability: " << (unstable ? "UNSTABLE" : "stable") << " (max |y| "
       << max_abs_y << ")\n";
}

ReplicationSummary summarize(const std::vector<MetricsReport>& reports) {
    ReplicationSummary s;
    if (reports.empty()) return s;
    const double n = static_cast<double>(reports.size());
    for (const auto& r : reports) {
        s.sum_iae_mean += r.sum_iae;
        s.dmr_mean += r.dmr_overall;
    }
    s.sum_iae_mean /= n;
    s.dmr_mean /= n;
    for (const auto& r : reports) {
        s.sum_iae_std += (r.sum_iae - s.sum_iae_mean) * (r.sum_iae - s.sum_iae_mean);
        s.dmr_std += (r.dmr_overall - s.dmr_mean) * (r.dmr_overall - s.dmr_mean);
    }
    s.sum_iae_std = std::sqrt(s.sum_iae_std / n);
    s.dmr_std = std::sqrt(s.dmr_std / n);
    return s;
}

}  // namespace wcs
