#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wcs/mac.hpp"
#include "wcs/pid.hpp"
#include "wcs/scheduler.hpp"
#include "wcs/sim_time.hpp"

namespace wcs {

struct RateChange {
    SimTime at = 0;
    double rate_mbps = 11.0;
    bool operator==(const RateChange&) const = default;
};

struct InterferenceConfig {
    bool enabled = false;
    SimTime period = 10 * kMicrosPerMilli;
    int payload_bytes = 1024;
    bool operator==(const InterferenceConfig&) const = default;
};

enum class RefStepDown { Half, Never, At };

// Full scenario description, parsed from the flat key-value file format
// (one `key = value` per line, `#` comments).
struct ScenarioConfig {
    int n_loops = 3;
    SimTime duration = 8 * kMicrosPerSecond;
    std::uint64_t seed = 1;
    int replications = 1;
    std::vector<RateChange> rate_schedule{{0, 11.0}};
    InterferenceConfig interference;
    SchedulerConfig scheduler;
    PidMethod pid_method = PidMethod::ForwardEuler;
    RefStepDown ref_step_down = RefStepDown::Half;
    SimTime ref_step_down_at = 0;  // used when ref_step_down == At
    int payload_bytes = 1024;
    MacParams mac;

    double initial_rate() const { return rate_schedule.front().rate_mbps; }
    SimTime ref_down_time() const;  // 0 = never

    void validate() const;  // throws ConfigError

    bool operator==(const ScenarioConfig&) const;
};

// Parses and validates; errors name the offending key and line.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Canonical re-emission; emit(parse(text)) re-parses to an equal config.
std::string emit_config(const ScenarioConfig& cfg);

// Shared by config and CLI: "250", "250ms", "2s", "30us" -> microseconds.
SimTime parse_duration(const std::string& text);

}  // namespace wcs
