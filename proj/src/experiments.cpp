#include "wcs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <thread>

namespace wcs {

namespace {

// Runs independent configs concurrently; results keep input order.
std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& cfgs,
                                 int max_threads) {
    std::vector<RunResult> results(cfgs.size());
    unsigned workers = max_threads > 0 ? static_cast<unsigned>(max_threads)
                                       : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, cfgs.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> futs;
    for (unsigned w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cfgs.size()) return;
                results[i] = run_scenario(cfgs[i]);
            }
        }));
    }
    for (auto& f : futs) f.get();
    return results;
}

ScenarioConfig with_seed(ScenarioConfig cfg, std::uint64_t seed) {
    cfg.seed = seed;
    cfg.replications = 1;
    return cfg;
}

}  // namespace

std::vector<RunResult> run_replicated(const ScenarioConfig& cfg,
                                      int max_threads) {
    std::vector<ScenarioConfig> cfgs;
    cfgs.reserve(cfg.replications);
    for (int i = 0; i < cfg.replications; ++i)
        cfgs.push_back(with_seed(cfg, cfg.seed + static_cast<std::uint64_t>(i)));
    return run_batch(cfgs, max_threads);
}

std::vector<SweepPoint> sweep(const ScenarioConfig& base,
                              const std::vector<double>& rates_mbps,
                              const std::vector<double>& periods_ms,
                              int replications, int max_threads) {
    std::vector<ScenarioConfig> cfgs;
    std::vector<SweepPoint> points;
    for (double rate : rates_mbps) {
        for (double h_ms : periods_ms) {
            ScenarioConfig cfg = base;
            cfg.scheduler.mode = SchedulerMode::None;
            cfg.rate_schedule = {{0, rate}};
            cfg.scheduler.h0 = h_ms / 1e3;
            cfg.scheduler.h_min =
                std::min(cfg.scheduler.h_min, cfg.scheduler.h0 / 2.0);
            cfg.scheduler.h_max = std::max(cfg.scheduler.h_max,
                                           cfg.scheduler.h0);
            cfg.validate();
            SweepPoint p;
            p.rate_mbps = rate;
            p.h_ms = h_ms;
            points.push_back(p);
            for (int rep = 0; rep < replications; ++rep)
                cfgs.push_back(with_seed(
                    cfg, cfg.seed + static_cast<std::uint64_t>(rep)));
        }
    }
    const auto results = run_batch(cfgs, max_threads);
    const double n = static_cast<double>(replications);
    for (std::size_t i = 0; i < points.size(); ++i) {
        double mean = 0;
        for (int rep = 0; rep < replications; ++rep)
            mean += results[i * replications + rep].report.dmr_overall;
        mean /= n;
        double var = 0;
        for (int rep = 0; rep < replications; ++rep) {
            const double d =
                results[i * replications + rep].report.dmr_overall - mean;
            var += d * d;
        }
        points[i].dmr_mean = mean;
        points[i].dmr_std = std::sqrt(var / n);
    }
    return points;
}

std::vector<CompareRow> compare(const ScenarioConfig& base,
                                const std::vector<SchedulerMode>& modes,
                                int max_threads) {
    std::vector<ScenarioConfig> cfgs;
    for (SchedulerMode mode : modes) {
        ScenarioConfig cfg = base;
        cfg.scheduler.mode = mode;
        cfg.validate();
        for (int rep = 0; rep < base.replications; ++rep)
            cfgs.push_back(
                with_seed(cfg, base.seed + static_cast<std::uint64_t>(rep)));
    }
    const auto results = run_batch(cfgs, max_threads);
    std::vector<CompareRow> rows;
    const double n = static_cast<double>(base.replications);
    for (std::size_t m = 0; m < modes.size(); ++m) {
        CompareRow row;
        row.mode = modes[m];
        for (int rep = 0; rep < base.replications; ++rep) {
            const auto& r = results[m * base.replications + rep].report;
            row.sum_iae += r.sum_iae;
            row.executions += static_cast<double>(r.scheduler_executions);
        }
        row.sum_iae /= n;
        row.executions /= n;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace wcs
