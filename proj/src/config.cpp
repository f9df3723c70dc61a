#include "wcs/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wcs/errors.hpp"

namespace wcs {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& key, int line,
                       const std::string& why) {
    throw ConfigError("config line " + std::to_string(line) + ", key '" + key +
                      "': " + why);
}

double parse_double(const std::string& key, int line, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
        fail(key, line, "malformed number '" + v + "'");
    return x;
}

long long parse_int(const std::string& key, int line, const std::string& v) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty())
        fail(key, line, "malformed integer '" + v + "'");
    return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

// "11:0.018,5.5:0.008" applied as per-rate overrides onto `table`.
void parse_rate_table(const std::string& key, int line, const std::string& v,
                      RateTable& table) {
    for (const auto& item : split(v, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) fail(key, line, "expected rate:value pairs");
        const double rate = parse_double(key, line, parts[0]);
        if (!is_supported_rate(rate))
            fail(key, line, "rate " + parts[0] + " is not an 802.11b level");
        table.set(rate, parse_double(key, line, parts[1]));
    }
}

}  // namespace

SimTime parse_duration(const std::string& text) {
    std::string v = trim(text);
    double scale = 1e6;  // bare numbers are seconds
    if (v.size() > 2 && v.compare(v.size() - 2, 2, "us") == 0) {
        scale = 1.0;
        v.resize(v.size() - 2);
    } else if (v.size() > 2 && v.compare(v.size() - 2, 2, "ms") == 0) {
        scale = 1e3;
        v.resize(v.size() - 2);
    } else if (v.size() > 1 && v.back() == 's') {
        v.pop_back();
    }
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty() || x < 0.0)
        throw ConfigError("malformed duration '" + text + "'");
    return static_cast<SimTime>(x * scale + 0.5);
}

SimTime ScenarioConfig::ref_down_time() const {
    switch (ref_step_down) {
        case RefStepDown::Never: return 0;
        case RefStepDown::Half: return duration / 2;
        case RefStepDown::At: return ref_step_down_at;
    }
    return 0;
}

void ScenarioConfig::validate() const {
    if (n_loops < 1) throw ConfigError("n_loops must be >= 1");
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (payload_bytes <= 0) throw ConfigError("payload_bytes must be > 0");
    if (rate_schedule.empty() || rate_schedule.front().at != 0)
        throw ConfigError("rate schedule must start at time 0");
    for (std::size_t i = 0; i < rate_schedule.size(); ++i) {
        if (!is_supported_rate(rate_schedule[i].rate_mbps))
            throw ConfigError("rate schedule uses an unsupported rate");
        if (i > 0 && rate_schedule[i].at <= rate_schedule[i - 1].at)
            throw ConfigError("rate schedule times must be increasing");
    }
    if (scheduler.mode != SchedulerMode::None) {
        // The scheduler will look these rates up at runtime; surface a
        // table miss now rather than mid-run.
        for (const auto& rc : rate_schedule) {
            if (!scheduler.k0_for_rate.contains(rc.rate_mbps))
                throw ConfigError("no k0 entry for scheduled rate " +
                                  std::to_string(rc.rate_mbps));
            if (!scheduler.setpoint_table.contains(rc.rate_mbps))
                throw ConfigError("no rho_r entry for scheduled rate " +
                                  std::to_string(rc.rate_mbps));
        }
    }
    if (interference.enabled && interference.period == 0)
        throw ConfigError("interference period must be > 0");
    if (interference.enabled && interference.payload_bytes <= 0)
        throw ConfigError("interference payload must be > 0");
    scheduler.validate();
    mac.validate();
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line) +
                              ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (value.empty()) fail(key, line, "empty value");

        auto dur = [&] {
            try {
                return parse_duration(value);
            } catch (const ConfigError& e) {
                fail(key, line, e.what());
            }
        };

        if (key == "n_loops") {
            cfg.n_loops = static_cast<int>(parse_int(key, line, value));
        } else if (key == "duration") {
            cfg.duration = dur();
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(key, line, value));
        } else if (key == "replications") {
            cfg.replications = static_cast<int>(parse_int(key, line, value));
        } else if (key == "rate") {
            cfg.rate_schedule.clear();
            for (const auto& item : split(value, ',')) {
                const auto parts = split(item, ':');
                if (parts.size() != 2)
                    fail(key, line, "expected time:rate pairs");
                RateChange rc;
                try {
                    rc.at = parse_duration(parts[0]);
                } catch (const ConfigError& e) {
                    fail(key, line, e.what());
                }
                rc.rate_mbps = parse_double(key, line, parts[1]);
                cfg.rate_schedule.push_back(rc);
            }
        } else if (key == "interference") {
            if (value == "none") {
                cfg.interference = InterferenceConfig{};
            } else {
                const auto parts = split(value, ',');
                if (parts.size() != 2)
                    fail(key, line, "expected 'none' or 'period,bytes'");
                cfg.interference.enabled = true;
                try {
                    cfg.interference.period = parse_duration(parts[0]);
                } catch (const ConfigError& e) {
                    fail(key, line, e.what());
                }
                cfg.interference.payload_bytes =
                    static_cast<int>(parse_int(key, line, parts[1]));
            }
        } else if (key == "mode") {
            if (value == "none")
                cfg.scheduler.mode = SchedulerMode::None;
            else if (value == "time_triggered")
                cfg.scheduler.mode = SchedulerMode::TimeTriggered;
            else if (value == "event_triggered")
                cfg.scheduler.mode = SchedulerMode::EventTriggered;
            else
                fail(key, line, "unknown mode '" + value + "'");
        } else if (key == "delta") {
            cfg.scheduler.delta = parse_double(key, line, value);
            if (cfg.scheduler.delta < 0) fail(key, line, "delta must be >= 0");
        } else if (key == "k0") {
            parse_rate_table(key, line, value, cfg.scheduler.k0_for_rate);
        } else if (key == "rho_r") {
            parse_rate_table(key, line, value, cfg.scheduler.setpoint_table);
        } else if (key == "drho_plus") {
            cfg.scheduler.drho_plus = parse_double(key, line, value);
        } else if (key == "drho_minus") {
            cfg.scheduler.drho_minus = parse_double(key, line, value);
        } else if (key == "t_ed") {
            cfg.scheduler.detector_period = dur();
        } else if (key == "t_fs") {
            cfg.scheduler.invocation_period = dur();
        } else if (key == "h0") {
            cfg.scheduler.h0 = to_seconds(dur());
        } else if (key == "h_min") {
            cfg.scheduler.h_min = to_seconds(dur());
        } else if (key == "h_max") {
            cfg.scheduler.h_max = to_seconds(dur());
        } else if (key == "pid_method") {
            if (value == "forward_euler")
                cfg.pid_method = PidMethod::ForwardEuler;
            else if (value == "tustin")
                cfg.pid_method = PidMethod::Tustin;
            else
                fail(key, line, "unknown pid_method '" + value + "'");
        } else if (key == "ref_step_down") {
            if (value == "half") {
                cfg.ref_step_down = RefStepDown::Half;
            } else if (value == "never") {
                cfg.ref_step_down = RefStepDown::Never;
            } else {
                cfg.ref_step_down = RefStepDown::At;
                cfg.ref_step_down_at = dur();
            }
        } else if (key == "payload_bytes") {
            cfg.payload_bytes = static_cast<int>(parse_int(key, line, value));
        } else if (key == "mac_slot") {
            cfg.mac.slot_time = dur();
        } else if (key == "mac_difs") {
            cfg.mac.difs = dur();
        } else if (key == "mac_sifs") {
            cfg.mac.sifs = dur();
        } else if (key == "mac_cw_min") {
            cfg.mac.cw_min = static_cast<int>(parse_int(key, line, value));
        } else if (key == "mac_cw_max") {
            cfg.mac.cw_max = static_cast<int>(parse_int(key, line, value));
        } else if (key == "mac_retry_limit") {
            cfg.mac.retry_limit = static_cast<int>(parse_int(key, line, value));
        } else if (key == "mac_phy_overhead") {
            cfg.mac.phy_overhead = dur();
        } else if (key == "mac_header_bytes") {
            cfg.mac.mac_header_bytes =
                static_cast<int>(parse_int(key, line, value));
        } else if (key == "mac_ack_bytes") {
            cfg.mac.ack_bytes = static_cast<int>(parse_int(key, line, value));
        } else {
            fail(key, line, "unknown key");
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_table(const RateTable& t) {
    std::string out;
    for (const auto& [r, v] : t.entries()) {
        if (!out.empty()) out += ",";
        out += fmt_double(r) + ":" + fmt_double(v);
    }
    return out;
}

}  // namespace

std::string emit_config(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "n_loops = " << cfg.n_loops << "\n";
    os << "duration = " << cfg.duration << "us\n";
    os << "seed = " << cfg.seed << "\n";
    os << "replications = " << cfg.replications << "\n";
    os << "rate = ";
    for (std::size_t i = 0; i < cfg.rate_schedule.size(); ++i) {
        if (i) os << ",";
        os << cfg.rate_schedule[i].at << "us:"
           << fmt_double(cfg.rate_schedule[i].rate_mbps);
    }
    os << "\n";
    if (cfg.interference.enabled)
        os << "interference = " << cfg.interference.period << "us,"
           << cfg.interference.payload_bytes << "\n";
    else
        os << "interference = none\n";
    os << "mode = " << scheduler_mode_name(cfg.scheduler.mode) << "\n";
    os << "delta = " << fmt_double(cfg.scheduler.delta) << "\n";
    os << "k0 = " << fmt_table(cfg.scheduler.k0_for_rate) << "\n";
    os << "rho_r = " << fmt_table(cfg.scheduler.setpoint_table) << "\n";
    os << "drho_plus = " << fmt_double(cfg.scheduler.drho_plus) << "\n";
    os << "drho_minus = " << fmt_double(cfg.scheduler.drho_minus) << "\n";
    os << "t_ed = " << cfg.scheduler.detector_period << "us\n";
    os << "t_fs = " << cfg.scheduler.invocation_period << "us\n";
    os << "h0 = " << from_seconds(cfg.scheduler.h0) << "us\n";
    os << "h_min = " << from_seconds(cfg.scheduler.h_min) << "us\n";
    os << "h_max = " << from_seconds(cfg.scheduler.h_max) << "us\n";
    os << "pid_method = "
       << (cfg.pid_method == PidMethod::ForwardEuler ? "forward_euler"
                                                     : "tustin")
       << "\n";
    switch (cfg.ref_step_down) {
        case RefStepDown::Half: os << "ref_step_down = half\n"; break;
        case RefStepDown::Never: os << "ref_step_down = never\n"; break;
        case RefStepDown::At:
            os << "ref_step_down = " << cfg.ref_step_down_at << "us\n";
            break;
    }
    os << "payload_bytes = " << cfg.payload_bytes << "\n";
    os << "mac_slot = " << cfg.mac.slot_time << "us\n";
    os << "mac_difs = " << cfg.mac.difs << "us\n";
    os << "mac_sifs = " << cfg.mac.sifs << "us\n";
    os << "mac_cw_min = " << cfg.mac.cw_min << "\n";
    os << "mac_cw_max = " << cfg.mac.cw_max << "\n";
    os << "mac_retry_limit = " << cfg.mac.retry_limit << "\n";
    os << "mac_phy_overhead = " << cfg.mac.phy_overhead << "us\n";
    os << "mac_header_bytes = " << cfg.mac.mac_header_bytes << "\n";
    os << "mac_ack_bytes = " << cfg.mac.ack_bytes << "\n";
    return os.str();
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
    return n_loops == o.n_loops && duration == o.duration && seed == o.seed &&
           replications == o.replications && rate_schedule == o.rate_schedule &&
           interference == o.interference && scheduler == o.scheduler &&
           pid_method == o.pid_method && ref_step_down == o.ref_step_down &&
           ref_down_time() == o.ref_down_time() &&
           payload_bytes == o.payload_bytes && mac == o.mac;
}

}  // namespace wcs
