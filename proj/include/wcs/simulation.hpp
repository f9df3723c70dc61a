#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "wcs/config.hpp"
#include "wcs/kernel.hpp"
#include "wcs/metrics.hpp"
#include "wcs/pid.hpp"
#include "wcs/plant.hpp"
#include "wcs/scheduler.hpp"
#include "wcs/wlan.hpp"

namespace wcs {

// Optional CSV sinks; any of them may be null.
struct RunArtifacts {
    std::ostream* loops = nullptr;      // t_us,loop_id,y,u,ref,h_us
    std::ostream* scheduler = nullptr;  // t_us,mode,rho,rho_r,K,h_us,executed,rate
    std::ostream* frames = nullptr;     // frame_id,kind,loop_id,release_us,fate,delivery_us,retries
    std::ostream* events = nullptr;     // time_us,seq,kind,node
};

struct RunResult {
    MetricsReport report;
    std::uint64_t frames_enqueued = 0;
    std::uint64_t frames_completed = 0;
    std::uint64_t frames_pending = 0;   // still queued or in flight at the end
    std::vector<TxInterval> success_intervals;  // when recording is enabled
};

struct RunOptions {
    RunArtifacts artifacts;
    bool record_success_intervals = false;
};

// One co-simulation run: N control loops closed over a DCF WLAN cell, with
// the optional feedback scheduler adapting the shared sampling period.
//
// Node layout: loop i uses node 2i for its sensor/actuator platform and
// node 2i+1 for its controller; the interfering transmitter and receiver,
// when enabled, occupy the last two ids.
class Simulation {
  public:
    explicit Simulation(ScenarioConfig cfg, RunOptions opts = {});

    RunResult run();

  private:
    struct Loop {
        int id = 0;
        PlantSim plant;
        PidDiscrete pid;
        double u_held = 0.0;
        SimTime last_tick = 0;
        std::uint64_t tick_token = 0;

        explicit Loop(PlantModel m) : plant(std::move(m)) {}
    };

    struct Sample {
        int loop = 0;
        SimTime sampled_at = 0;
        SimTime deadline = 0;
        std::optional<SimTime> cmd_delivered;
    };

    int sa_node(int loop) const { return 2 * loop; }
    int ctrl_node(int loop) const { return 2 * loop + 1; }
    int interference_tx() const { return 2 * cfg_.n_loops; }
    int interference_rx() const { return 2 * cfg_.n_loops + 1; }

    double ref_value(SimTime t) const;
    void advance_plant(Loop& loop, SimTime until);
    void schedule_tick(Loop& loop, SimTime at);
    void handle_tick(int loop_id, std::uint64_t token);
    void handle_delivery(const Frame& f, SimTime t);
    void handle_outcome(const TxOutcome& o);
    void handle_deadline(std::uint64_t sample_id);
    void handle_detector_tick();
    void broadcast_period(double h_seconds);
    void emit_interference();

    ScenarioConfig cfg_;
    RunOptions opts_;
    Simulator sim_;
    Wlan wlan_;
    Metrics metrics_;
    std::vector<Loop> loops_;
    SchedulerState sched_;
    DmrWindow window_;
    SimTime current_h_us_;
    SimTime ref_down_;  // 0 = never
    std::uint64_t next_frame_id_ = 1;
    std::uint64_t next_sample_id_ = 1;
    std::unordered_map<std::uint64_t, Sample> samples_;
};

RunResult run_scenario(const ScenarioConfig& cfg, RunOptions opts = {});

}  // namespace wcs
