#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wcs/config.hpp"
#include "wcs/errors.hpp"
#include "wcs/experiments.hpp"
#include "wcs/simulation.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw wcs::ConfigError("empty list: '" + s + "'");
    return out;
}

std::vector<wcs::SchedulerMode> parse_modes(const std::string& s) {
    std::vector<wcs::SchedulerMode> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "none")
            out.push_back(wcs::SchedulerMode::None);
        else if (item == "time_triggered")
            out.push_back(wcs::SchedulerMode::TimeTriggered);
        else if (item == "event_triggered")
            out.push_back(wcs::SchedulerMode::EventTriggered);
        else
            throw wcs::ConfigError("unknown mode '" + item + "'");
    }
    if (out.empty()) throw wcs::ConfigError("empty mode list");
    return out;
}

struct FileSinks {
    std::ofstream loops, scheduler, frames, events, metrics, summary;
};

// Opens per-run CSV sinks under `dir` and wires the headers.
wcs::RunOptions open_artifacts(FileSinks& sinks, const fs::path& dir,
                               bool trace) {
    fs::create_directories(dir);
    wcs::RunOptions opts;
    sinks.loops.open(dir / "loops.csv");
    sinks.loops << "t_us,loop_id,y,u,ref,h_us\n";
    opts.artifacts.loops = &sinks.loops;
    sinks.scheduler.open(dir / "scheduler.csv");
    sinks.scheduler << "t_us,mode,rho,rho_r,K,h_us,executed,rate\n";
    opts.artifacts.scheduler = &sinks.scheduler;
    sinks.frames.open(dir / "frames.csv");
    sinks.frames << "frame_id,kind,loop_id,release_us,fate,delivery_us,retries\n";
    opts.artifacts.frames = &sinks.frames;
    if (trace) {
        sinks.events.open(dir / "events.csv");
        sinks.events << "time_us,seq,kind,node\n";
        opts.artifacts.events = &sinks.events;
    }
    return opts;
}

int cmd_run(const wcs::ScenarioConfig& cfg, const std::optional<fs::path>& out,
            bool trace) {
    std::vector<wcs::MetricsReport> reports;
    for (int rep = 0; rep < cfg.replications; ++rep) {
        wcs::ScenarioConfig c = cfg;
        c.seed = cfg.seed + static_cast<std::uint64_t>(rep);
        c.replications = 1;
        FileSinks sinks;
        wcs::RunOptions opts;
        if (out) {
            const fs::path dir = cfg.replications == 1
                                     ? *out
                                     : *out / ("rep" + std::to_string(rep));
            opts = open_artifacts(sinks, dir, trace);
            const auto result = wcs::run_scenario(c, std::move(opts));
            std::ofstream mcsv(dir / "metrics.csv");
            result.report.write_csv(mcsv);
            std::ofstream msum(dir / "summary.txt");
            result.report.write_summary(msum);
            reports.push_back(result.report);
        } else {
            reports.push_back(wcs::run_scenario(c).report);
        }
        std::cout << "--- seed " << c.seed << " ---\n";
        reports.back().write_summary(std::cout);
    }
    if (cfg.replications > 1) {
        const auto s = wcs::summarize(reports);
        std::cout << "--- " << cfg.replications << " replications ---\n"
                  << "sum IAE: mean " << s.sum_iae_mean << ", std "
                  << s.sum_iae_std << "\n"
                  << "DMR: mean " << s.dmr_mean << ", std " << s.dmr_std
                  << "\n";
        if (out) {
            std::ofstream rs(*out / "replications.csv");
            rs << "seed,sum_iae,dmr_overall,executions,unstable\n";
            for (int rep = 0; rep < cfg.replications; ++rep) {
                const auto& r = reports[rep];
                rs << cfg.seed + rep << "," << r.sum_iae << ","
                   << r.dmr_overall << "," << r.scheduler_executions << ","
                   << (r.unstable ? 1 : 0) << "\n";
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wireless control system co-simulator (DCF WLAN + adaptive "
                 "feedback scheduling)"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_dir;
    bool trace = false;
    app.add_option("--seed", seed_override, "Override the scenario seed");
    app.add_option("--out", out_dir, "Directory for CSV artifacts");
    app.add_flag("--trace", trace, "Dump the dispatched-event trace");

    auto* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("config", config_path, "Scenario file")->required();

    auto* sw = app.add_subcommand("sweep", "Fixed-period DMR surface");
    sw->add_option("config", config_path, "Scenario file")->required();
    std::string rates_arg = "5.5,11";
    std::string periods_arg = "8,10,12,14,16,18,20,22,24,26,28,30";
    int reps = 10;
    sw->add_option("--rates", rates_arg, "Rates in Mb/s, comma separated");
    sw->add_option("--periods", periods_arg, "Periods in ms, comma separated");
    sw->add_option("--reps", reps, "Replications per grid point");

    auto* cmp = app.add_subcommand("compare", "Invocation-mode comparison");
    cmp->add_option("config", config_path, "Scenario file")->required();
    std::string modes_arg = "none,time_triggered,event_triggered";
    cmp->add_option("--modes", modes_arg, "Scheduler modes, comma separated");

    CLI11_PARSE(app, argc, argv);

    try {
        wcs::ScenarioConfig cfg = wcs::load_config(config_path);
        if (seed_override) cfg.seed = *seed_override;
        std::optional<fs::path> out;
        if (out_dir) out = fs::path(*out_dir);

        if (app.got_subcommand(run)) return cmd_run(cfg, out, trace);

        if (app.got_subcommand(sw)) {
            const auto points = wcs::sweep(cfg, parse_double_list(rates_arg),
                                           parse_double_list(periods_arg),
                                           reps);
            std::ostringstream csv;
            csv << "rate,h_ms,dmr_mean,dmr_std\n";
            for (const auto& p : points)
                csv << p.rate_mbps << "," << p.h_ms << "," << p.dmr_mean << ","
                    << p.dmr_std << "\n";
            std::cout << csv.str();
            if (out) {
                fs::create_directories(*out);
                std::ofstream(*out / "sweep.csv") << csv.str();
            }
            return 0;
        }

        if (app.got_subcommand(cmp)) {
            const auto rows = wcs::compare(cfg, parse_modes(modes_arg));
            std::ostringstream csv;
            csv << "mode,sum_iae,executions\n";
            for (const auto& r : rows)
                csv << wcs::scheduler_mode_name(r.mode) << "," << r.sum_iae
                    << "," << r.executions << "\n";
            std::cout << csv.str();
            if (out) {
                fs::create_directories(*out);
                std::ofstream(*out / "compare.csv") << csv.str();
            }
            return 0;
        }
    } catch (const wcs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
