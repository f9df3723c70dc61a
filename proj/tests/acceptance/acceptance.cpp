// Acceptance checks for the co-simulator: regime, trend, ordering and
// oracle criteria. Each criterion prints exactly one PASS/FAIL line; the
// process exits nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wcs/config.hpp"
#include "wcs/experiments.hpp"
#include "wcs/kernel.hpp"
#include "wcs/mac.hpp"
#include "wcs/metrics.hpp"
#include "wcs/plant.hpp"
#include "wcs/scheduler.hpp"
#include "wcs/simulation.hpp"
#include "wcs/wlan.hpp"

using namespace wcs;

namespace {

// ---- scenario definitions (mirrors scenarios/*.cfg) ----------------------

// MacParams are 802.11b with the short preamble (96 us); tuned once against
// the h=12 ms regime and frozen for every criterion below.
MacParams tuned_mac() {
    MacParams p;
    p.phy_overhead = 96;
    return p;
}

ScenarioConfig scenario1() {
    ScenarioConfig cfg;
    cfg.n_loops = 3;
    cfg.duration = 8 * kMicrosPerSecond;
    cfg.rate_schedule = {{0, 11.0}};
    cfg.scheduler.mode = SchedulerMode::EventTriggered;
    cfg.scheduler.delta = 0.03;
    cfg.mac = tuned_mac();
    return cfg;
}

ScenarioConfig scenario2() {
    ScenarioConfig cfg = scenario1();
    cfg.rate_schedule = {{0, 5.5}};
    cfg.interference.enabled = true;
    cfg.interference.period = 10 * kMicrosPerMilli;
    cfg.interference.payload_bytes = 1024;
    cfg.scheduler.delta = 0.06;
    return cfg;
}

ScenarioConfig with_mode(ScenarioConfig cfg, SchedulerMode mode) {
    cfg.scheduler.mode = mode;
    return cfg;
}

constexpr int kSeeds = 5;  // seeds 1..5 for the replicated criteria

std::vector<RunResult> run_seeds(const ScenarioConfig& base, bool intervals =
                                                                 false) {
    std::vector<RunResult> out;
    for (int s = 1; s <= kSeeds; ++s) {
        ScenarioConfig cfg = base;
        cfg.seed = static_cast<std::uint64_t>(s);
        RunOptions opts;
        opts.record_success_intervals = intervals;
        out.push_back(run_scenario(cfg, std::move(opts)));
    }
    return out;
}

double final_2s_window_mean(const MetricsReport& r) {
    const SimTime cutoff = r.duration - 2 * kMicrosPerSecond;
    double sum = 0.0;
    int n = 0;
    for (const WindowPoint& w : r.windows) {
        if (w.t > cutoff) {
            sum += w.rho;
            ++n;
        }
    }
    return n ? sum / n : -1.0;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / double(v.size());
}

// ---- criteria -------------------------------------------------------------

struct SweepData {
    // dmr[rate][h_ms]
    std::map<double, std::map<int, double>> dmr;
};

SweepData run_sweep() {
    ScenarioConfig base;
    base.n_loops = 3;
    base.duration = 3 * kMicrosPerSecond;
    base.scheduler.mode = SchedulerMode::None;
    base.mac = tuned_mac();

    std::vector<double> periods;
    for (int h = 8; h <= 30; h += 2) periods.push_back(double(h));
    const auto points = sweep(base, {5.5, 11.0}, periods, 10);

    SweepData d;
    for (const SweepPoint& p : points)
        d.dmr[p.rate_mbps][int(p.h_ms + 0.5)] = p.dmr_mean;
    return d;
}

bool criterion1(const SweepData& d, std::string& detail) {
    bool ok = true;
    for (const auto& [rate, curve] : d.dmr) {
        int inversions = 0;
        double prev = 2.0;
        for (const auto& [h, dmr] : curve) {
            if (dmr > prev) {
                // Allow one adjacent inversion of at most 0.02 (noise).
                if (dmr - prev > 0.02 || ++inversions > 1) ok = false;
            }
            prev = dmr;
        }
    }
    for (int h = 8; h <= 30; h += 2) {
        if (d.dmr.at(11.0).at(h) > d.dmr.at(5.5).at(h)) {
            ok = false;
            detail += " ordering violated at h=" + std::to_string(h);
        }
    }
    if (ok) detail = "non-increasing in h, DMR(11) <= DMR(5.5) at all h";
    return ok;
}

bool criterion2(const SweepData& d, std::string& detail) {
    const double at55 = d.dmr.at(5.5).at(12);
    const double at11 = d.dmr.at(11.0).at(12);
    std::ostringstream os;
    os << "h=12 ms: DMR " << at55 << " at 5.5 Mb/s (need > 0.50), " << at11
       << " at 11 Mb/s (need < 0.10)";
    detail = os.str();
    return at55 > 0.50 && at11 < 0.10;
}

bool criterion3(std::string& detail) {
    ScenarioConfig s1 = with_mode(scenario1(), SchedulerMode::None);
    s1.seed = 1;
    const RunResult r1 = run_scenario(s1);

    ScenarioConfig s2 = with_mode(scenario2(), SchedulerMode::None);
    s2.seed = 1;
    const RunResult r2 = run_scenario(s2);

    // "Sustained after the transient": every window past t = 2 s.
    double post_transient_min = 1.0;
    for (const WindowPoint& w : r2.report.windows)
        if (w.t > 2 * kMicrosPerSecond)
            post_transient_min = std::min(post_transient_min, w.rho);

    std::ostringstream os;
    os << "Scenario I DMR " << r1.report.dmr_overall << " ("
       << (r1.report.unstable ? "unstable" : "stable")
       << "), Scenario II windows past 2 s all >= " << post_transient_min
       << " (" << (r2.report.unstable ? "unstable" : "stable") << ")";
    detail = os.str();
    return r1.report.dmr_overall < 0.05 && !r1.report.unstable &&
           post_transient_min > 0.90 && r2.report.unstable;
}

bool criterion4(const std::vector<RunResult>& et1,
                const std::vector<RunResult>& et2, std::string& detail) {
    bool ok = true;
    std::vector<double> iae1, iae2, tail1, tail2;
    for (const RunResult& r : et1) {
        iae1.push_back(r.report.sum_iae);
        tail1.push_back(final_2s_window_mean(r.report));
        if (r.report.final_h < 0.006 || r.report.final_h > 0.012) ok = false;
        if (r.report.unstable) ok = false;
    }
    for (const RunResult& r : et2) {
        iae2.push_back(r.report.sum_iae);
        tail2.push_back(final_2s_window_mean(r.report));
        if (r.report.final_h <= 0.015) ok = false;  // must have increased
        if (r.report.unstable) ok = false;
        if (!std::isfinite(r.report.sum_iae)) ok = false;
    }
    // Window-DMR bands over the final 2 s, mean across replications:
    // Scenario I within rho_r +- 0.05 = [0, 0.10]; Scenario II 0.10 +- 0.05.
    const double t1 = mean_of(tail1), t2 = mean_of(tail2);
    if (t1 < 0.0 || t1 > 0.10) ok = false;
    if (t2 < 0.05 || t2 > 0.15) ok = false;
    const double ratio = mean_of(iae2) / mean_of(iae1);
    if (!(ratio <= 1.5)) ok = false;

    std::ostringstream os;
    os << "h settles " << et1.front().report.final_h * 1e3
       << " ms, tail DMR " << t1 << " / " << t2 << ", sumIAE ratio " << ratio
       << " (need <= 1.5)";
    detail = os.str();
    return ok;
}

bool criterion5(const std::vector<RunResult>& et1,
                const std::vector<RunResult>& et2,
                const std::vector<RunResult>& tt1,
                const std::vector<RunResult>& tt2, std::string& detail) {
    bool ok = true;
    std::vector<double> iae_et1, iae_tt1, iae_et2, iae_tt2;
    for (const RunResult& r : tt1) {
        if (r.report.scheduler_executions != 16) ok = false;
        iae_tt1.push_back(r.report.sum_iae);
    }
    for (const RunResult& r : tt2) {
        if (r.report.scheduler_executions != 16) ok = false;
        iae_tt2.push_back(r.report.sum_iae);
    }
    for (const RunResult& r : et1) {
        if (r.report.scheduler_executions >= 16) ok = false;
        iae_et1.push_back(r.report.sum_iae);
    }
    for (const RunResult& r : et2) {
        if (r.report.scheduler_executions >= 16) ok = false;
        iae_et2.push_back(r.report.sum_iae);
    }
    const double rel1 =
        std::abs(mean_of(iae_et1) - mean_of(iae_tt1)) / mean_of(iae_tt1);
    const double rel2 =
        std::abs(mean_of(iae_et2) - mean_of(iae_tt2)) / mean_of(iae_tt2);
    if (rel1 >= 0.10 || rel2 >= 0.10) ok = false;

    std::ostringstream os;
    os << "TT executions 16 exactly; ET " << et1.front().report.scheduler_executions
       << " / " << et2.front().report.scheduler_executions
       << " (seed 1); |ET-TT| sumIAE " << rel1 * 100 << "% / " << rel2 * 100
       << "%";
    detail = os.str();
    return ok;
}

// Independent matrix-exponential series oracle (scaling and squaring).
struct ExpmOracle {
    Mat2 Ad;
    Vec2 Bd;
};

ExpmOracle expm_series(const Mat2& A, const Vec2& B, double dt) {
    double amax = std::max(std::max(std::abs(A.m00), std::abs(A.m01)),
                           std::max(std::abs(A.m10), std::abs(A.m11)));
    int squarings = 0;
    double scale = dt;
    while (amax * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    const Mat2 As = A * scale;
    Mat2 expm = Mat2::identity();
    Mat2 integ = Mat2::identity() * scale;
    Mat2 term = Mat2::identity();
    double factorial = 1.0;
    for (int k = 1; k <= 30; ++k) {
        term = term * As;
        factorial *= k;
        expm = expm + term * (1.0 / factorial);
        integ = integ + term * (scale / factorial / (k + 1.0));
    }
    for (int s = 0; s < squarings; ++s) {
        integ = integ + expm * integ;
        expm = expm * expm;
    }
    return {expm, integ * B};
}

bool criterion6(std::string& detail) {
    bool ok = true;

    // ZOH vs series oracle, 1e-12 relative.
    const PlantModel plant = dc_motor_plant();
    for (double dt : {0.1e-3, 1e-3, 15e-3, 50e-3}) {
        const ZohDiscretization d = zoh_discretize(plant, dt);
        const ExpmOracle o = expm_series(plant.A, plant.B, dt);
        auto rel = [](double got, double want) {
            return std::abs(got - want) / std::max(1.0, std::abs(want));
        };
        if (rel(d.Ad.m00, o.Ad.m00) > 1e-12 ||
            rel(d.Ad.m11, o.Ad.m11) > 1e-12 || rel(d.Bd.a, o.Bd.a) > 1e-12 ||
            rel(d.Bd.b, o.Bd.b) > 1e-12)
            ok = false;
    }

    // DC gain to 1e-9.
    if (std::abs(plant.dc_gain() - 2029.826 / (26.29 * 2.296)) > 1e-9)
        ok = false;

    // Scheduler arithmetic, bit for bit.
    if (adapt_gain(0.50, 0.05, 0.018, 0.1, 0.08) != 0.018 / 2.0) ok = false;
    if (adapt_gain(0.01, 0.10, 0.008, 0.1, 0.08) != 2.0 * 0.008) ok = false;
    if (compute_period(0.015, 0.009, 0.45, 0.002, 0.050) !=
        0.015 + 0.009 * 0.45)
        ok = false;
    if (!detect_event(0.08, 0.05, 0.03)) ok = false;  // inclusive boundary
    SchedulerConfig scfg;
    const SchedulerState st =
        scheduler_run(initial_scheduler_state(scfg, 11.0), 0.50, 11.0, scfg);
    if (st.h != 0.015 + 0.009 * 0.45 || st.last_k != 0.009) ok = false;

    // Single-node uncontended delay, exact.
    bool delay_ok = true;
    for (double rate : {5.5, 11.0}) {
        Simulator sim;
        const MacParams p = tuned_mac();
        Wlan wlan(sim, p, rate, 1, 2);
        SimTime delivered = 0;
        wlan.on_delivery([&](const Frame&, SimTime t) { delivered = t; });
        Frame f;
        f.id = 1;
        f.kind = FrameKind::Sensor;
        f.loop_id = 0;
        f.payload_bytes = 1024;
        f.src = 0;
        f.dst = 1;
        sim.schedule(0, EventKind::SamplingTick, 0,
                     [&] { wlan.enqueue(0, f); });
        sim.run_until(kMicrosPerSecond);
        if (delivered != p.difs + frame_airtime(1024, rate, p) + p.sifs +
                             ack_airtime(rate, p))
            delay_ok = false;
    }
    if (!delay_ok) ok = false;

    detail = ok ? "ZOH 1e-12, DC gain 1e-9, scheduler arithmetic exact, "
                  "uncontended delay exact"
                : "numerical oracle mismatch";
    return ok;
}

bool criterion7(const std::vector<RunResult>& et1,
                const std::vector<RunResult>& et2,
                const std::vector<RunResult>& tt1,
                const std::vector<RunResult>& tt2, std::string& detail) {
    bool ok = true;

    // Frame-fate conservation on every collected run.
    for (const auto* batch : {&et1, &et2, &tt1, &tt2})
        for (const RunResult& r : *batch)
            if (r.frames_enqueued != r.frames_completed + r.frames_pending)
                ok = false;

    // No overlapping successful transmissions (worst-contention scenario).
    {
        ScenarioConfig cfg = scenario2();
        cfg.seed = 1;
        RunOptions opts;
        opts.record_success_intervals = true;
        const RunResult r = run_scenario(cfg, std::move(opts));
        for (std::size_t i = 1; i < r.success_intervals.size(); ++i)
            if (r.success_intervals[i].start < r.success_intervals[i - 1].end)
                ok = false;
    }

    // h clamped under adversarial rho sequences.
    {
        SchedulerConfig cfg;
        SchedulerState s = initial_scheduler_state(cfg, 11.0);
        for (int i = 0; i < 2000; ++i) {
            s = scheduler_run(s, (i % 3 == 0) ? 1.0 : 0.0, 11.0, cfg);
            if (s.h < cfg.h_min || s.h > cfg.h_max) ok = false;
        }
    }

    // Seeded determinism: identical event traces, byte for byte.
    {
        auto trace = [] {
            ScenarioConfig cfg = scenario1();
            cfg.seed = 1;
            cfg.duration = 2 * kMicrosPerSecond;
            std::ostringstream events;
            RunOptions opts;
            opts.artifacts.events = &events;
            run_scenario(cfg, std::move(opts));
            return events.str();
        };
        if (trace() != trace()) ok = false;
    }

    // ET execution count <= TT count for every tested seed.
    for (int i = 0; i < kSeeds; ++i) {
        if (et1[i].report.scheduler_executions >
            tt1[i].report.scheduler_executions)
            ok = false;
        if (et2[i].report.scheduler_executions >
            tt2[i].report.scheduler_executions)
            ok = false;
    }

    detail = "conservation, non-overlap, h clamp, determinism, ET <= TT";
    return ok;
}

}  // namespace

int main() {
    const SweepData sweep_data = run_sweep();
    const auto et1 = run_seeds(scenario1());
    const auto et2 = run_seeds(scenario2());
    const auto tt1 = run_seeds(with_mode(scenario1(), SchedulerMode::TimeTriggered));
    const auto tt2 = run_seeds(with_mode(scenario2(), SchedulerMode::TimeTriggered));

    int failures = 0;
    auto report = [&](int n, const char* name, bool pass,
                      const std::string& detail) {
        std::printf("%s criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", n,
                    name, detail.c_str());
        if (!pass) ++failures;
    };

    std::string d;
    bool ok;

    d.clear();
    ok = criterion1(sweep_data, d);
    report(1, "DMR trend over sampling period and rate", ok, d);

    d.clear();
    ok = criterion2(sweep_data, d);
    report(2, "DMR regime at h = 12 ms", ok, d);

    d.clear();
    ok = criterion3(d);
    report(3, "Non-FS baselines", ok, d);

    d.clear();
    ok = criterion4(et1, et2, d);
    report(4, "adaptive regulation in both scenarios", ok, d);

    d.clear();
    ok = criterion5(et1, et2, tt1, tt2, d);
    report(5, "event- vs time-triggered execution counts", ok, d);

    d.clear();
    ok = criterion6(d);
    report(6, "numerical oracles", ok, d);

    d.clear();
    ok = criterion7(et1, et2, tt1, tt2, d);
    report(7, "structural properties", ok, d);

    return failures == 0 ? 0 : 1;
}
