#include "wcs/simulation.hpp"

#include <cmath>

#include "wcs/errors.hpp"

namespace wcs {

namespace {

int wlan_node_count(const ScenarioConfig& cfg) {
    return 2 * cfg.n_loops + (cfg.interference.enabled ? 2 : 0);
}

}  // namespace

Simulation::Simulation(ScenarioConfig cfg, RunOptions opts)
    : cfg_(std::move(cfg)),
      opts_(std::move(opts)),
      wlan_(sim_, cfg_.mac, cfg_.initial_rate(), cfg_.seed,
            wlan_node_count(cfg_)),
      metrics_(cfg_.n_loops, 1.0),
      sched_(cfg_.scheduler.mode == SchedulerMode::None
                 ? SchedulerState{cfg_.scheduler.h0, 0.0, 0.0,
                                  cfg_.initial_rate(), 0, 0.0}
                 : initial_scheduler_state(cfg_.scheduler,
                                           cfg_.initial_rate())),
      current_h_us_(from_seconds(cfg_.scheduler.h0)),
      ref_down_(cfg_.ref_down_time()) {
    cfg_.validate();
    wlan_.record_success_intervals(opts_.record_success_intervals);
    wlan_.on_delivery([this](const Frame& f, SimTime t) { handle_delivery(f, t); });
    wlan_.on_outcome([this](const TxOutcome& o) { handle_outcome(o); });

    for (int i = 0; i < cfg_.n_loops; ++i) {
        loops_.emplace_back(dc_motor_plant());
        loops_.back().id = i;
        loops_.back().pid = PidDiscrete::design(
            PidContinuous{}, cfg_.scheduler.h0, cfg_.pid_method);
    }
}

double Simulation::ref_value(SimTime t) const {
    if (ref_down_ != 0 && t >= ref_down_) return 0.0;
    return 1.0;
}

void Simulation::advance_plant(Loop& loop, SimTime until) {
    // The reference is constant over the interval: a kernel event forces an
    // advance exactly at the reference step, so intervals never straddle it.
    const double ref = ref_value(loop.plant.last_update());
    const int id = loop.id;
    loop.plant.advance(until, loop.u_held,
                       [this, id, ref](double y0, double y1, double dt) {
                           metrics_.accumulate_iae(id, ref, y0, y1, dt);
                       });
}

void Simulation::schedule_tick(Loop& loop, SimTime at) {
    const int id = loop.id;
    const std::uint64_t token = loop.tick_token;
    sim_.schedule(at, EventKind::SamplingTick, sa_node(id),
                  [this, id, token] { handle_tick(id, token); });
}

void Simulation::handle_tick(int loop_id, std::uint64_t token) {
    Loop& loop = loops_[loop_id];
    if (token != loop.tick_token) return;  // rescheduled by a period change
    const SimTime t = sim_.now();
    const double h_seconds = to_seconds(current_h_us_);
    if (loop.pid.h() != h_seconds)
        loop.pid = PidDiscrete::design(PidContinuous{}, h_seconds,
                                       cfg_.pid_method, loop.pid.integral());
    advance_plant(loop, t);

    const std::uint64_t sample_id = next_sample_id_++;
    Sample s;
    s.loop = loop_id;
    s.sampled_at = t;
    s.deadline = t + current_h_us_;
    samples_.emplace(sample_id, s);
    // Checked one microsecond past the deadline so that a delivery at
    // exactly the deadline is already visible (it counts as on time).
    sim_.schedule(s.deadline + 1, EventKind::DeadlineExpiry, sa_node(loop_id),
                  [this, sample_id] { handle_deadline(sample_id); });

    Frame f;
    f.id = next_frame_id_++;
    f.kind = FrameKind::Sensor;
    f.loop_id = loop_id;
    f.sample_id = sample_id;
    f.payload_bytes = cfg_.payload_bytes;
    f.deadline = s.deadline;
    f.src = sa_node(loop_id);
    f.dst = ctrl_node(loop_id);
    f.carried_y = loop.plant.y();
    wlan_.enqueue(f.src, f);

    if (opts_.artifacts.loops)
        *opts_.artifacts.loops
            << t << "," << loop_id << "," << loop.plant.y() << ","
            << loop.u_held << "," << ref_value(t) << "," << current_h_us_
            << "\n";

    loop.last_tick = t;
    schedule_tick(loop, t + current_h_us_);
}

void Simulation::handle_delivery(const Frame& f, SimTime t) {
    switch (f.kind) {
        case FrameKind::Sensor: {
            // Controller compute time is negligible: the command frame is
            // queued the instant the sensor frame arrives.
            Loop& loop = loops_[f.loop_id];
            const double u = loop.pid.compute(ref_value(t), f.carried_y);
            Frame cmd;
            cmd.id = next_frame_id_++;
            cmd.kind = FrameKind::Command;
            cmd.loop_id = f.loop_id;
            cmd.sample_id = f.sample_id;
            cmd.payload_bytes = cfg_.payload_bytes;
            cmd.deadline = f.deadline;
            cmd.src = ctrl_node(f.loop_id);
            cmd.dst = sa_node(f.loop_id);
            cmd.carried_u = u;
            wlan_.enqueue(cmd.src, cmd);
            break;
        }
        case FrameKind::Command: {
            // Applied on arrival even when late; lateness is still a miss.
            Loop& loop = loops_[f.loop_id];
            advance_plant(loop, t);
            loop.u_held = f.carried_u;
            auto it = samples_.find(f.sample_id);
            if (it != samples_.end()) it->second.cmd_delivered = t;
            break;
        }
        case FrameKind::Interference:
            break;
    }
}

void Simulation::handle_outcome(const TxOutcome& o) {
    if (opts_.artifacts.frames) {
        auto& os = *opts_.artifacts.frames;
        os << o.frame_id << "," << frame_kind_name(o.kind) << ",";
        if (o.loop_id >= 0) os << o.loop_id;
        os << "," << o.release_time << "," << frame_fate_name(o.fate) << ",";
        if (o.fate != FrameFate::Dropped) os << o.delivery_time;
        os << "," << o.retries << "\n";
    }
}

void Simulation::handle_deadline(std::uint64_t sample_id) {
    auto it = samples_.find(sample_id);
    if (it == samples_.end()) throw SimFault("deadline for unknown sample");
    const Sample& s = it->second;
    const bool met = s.cmd_delivered && *s.cmd_delivered <= s.deadline;
    window_.record(met);
    metrics_.record_sample(met);
    samples_.erase(it);
}

void Simulation::broadcast_period(double h_seconds) {
    current_h_us_ = from_seconds(h_seconds);
    // Loops re-discretize their PIDs at the next sample; here we only move
    // the next sampling instant to last_tick + new h.
    for (Loop& loop : loops_) {
        ++loop.tick_token;
        const SimTime next = loop.last_tick + current_h_us_;
        schedule_tick(loop, std::max(sim_.now(), next));
    }
}

void Simulation::handle_detector_tick() {
    const SimTime t = sim_.now();
    const auto rho = measure_dmr(window_);
    bool executed = false;
    if (rho) {
        metrics_.record_window(t, window_.met, window_.missed);
        const SchedulerMode mode = cfg_.scheduler.mode;
        const bool fire =
            mode == SchedulerMode::TimeTriggered ||
            (mode == SchedulerMode::EventTriggered &&
             detect_event(*rho, sched_.rho_r, cfg_.scheduler.delta));
        if (fire) {
            sched_ = scheduler_run(sched_, *rho, wlan_.rate(), cfg_.scheduler);
            metrics_.record_execution();
            broadcast_period(sched_.h);
            executed = true;
        }
        window_.reset();  // tumbling; an empty window carries counts forward
    }
    if (opts_.artifacts.scheduler) {
        auto& os = *opts_.artifacts.scheduler;
        os << t << "," << scheduler_mode_name(cfg_.scheduler.mode) << ",";
        if (rho) os << *rho;
        os << "," << sched_.rho_r << "," << (executed ? sched_.last_k : 0.0)
           << "," << current_h_us_ << "," << (executed ? 1 : 0) << ","
           << wlan_.rate() << "\n";
    }
}

void Simulation::emit_interference() {
    Frame f;
    f.id = next_frame_id_++;
    f.kind = FrameKind::Interference;
    f.payload_bytes = cfg_.interference.payload_bytes;
    f.src = interference_tx();
    f.dst = interference_rx();
    wlan_.enqueue(f.src, f);
    sim_.schedule(sim_.now() + cfg_.interference.period,
                  EventKind::InterferenceEmission, interference_tx(),
                  [this] { emit_interference(); });
}

RunResult Simulation::run() {
    if (opts_.artifacts.events) {
        auto* os = opts_.artifacts.events;
        sim_.set_trace([os](const Event& ev) {
            *os << ev.fire_time << "," << ev.seq << ","
                << event_kind_name(ev.kind) << "," << ev.node << "\n";
        });
    }

    for (Loop& loop : loops_) schedule_tick(loop, 0);

    for (const RateChange& rc : cfg_.rate_schedule) {
        if (rc.at == 0) continue;  // initial rate, set at construction
        const double r = rc.rate_mbps;
        sim_.schedule(rc.at, EventKind::RateChange, -1,
                      [this, r] { wlan_.set_rate(r); });
    }

    if (cfg_.interference.enabled)
        sim_.schedule(0, EventKind::InterferenceEmission, interference_tx(),
                      [this] { emit_interference(); });

    if (ref_down_ != 0 && ref_down_ <= cfg_.duration)
        sim_.schedule(ref_down_, EventKind::ReferenceStep, -1, [this] {
            for (Loop& loop : loops_) advance_plant(loop, sim_.now());
        });

    // Detector/invocation grid. The event detector runs in every mode (in
    // mode none it only measures, for the DMR time series).
    const SimTime period = cfg_.scheduler.mode == SchedulerMode::TimeTriggered
                               ? cfg_.scheduler.invocation_period
                               : cfg_.scheduler.detector_period;
    for (SimTime t = period; t <= cfg_.duration; t += period)
        sim_.schedule(t, EventKind::DetectorTick, -1,
                      [this] { handle_detector_tick(); });

    sim_.run_until(cfg_.duration);
    for (Loop& loop : loops_) advance_plant(loop, cfg_.duration);

    RunResult result;
    result.report = metrics_.finalize(cfg_.duration, to_seconds(current_h_us_));
    result.frames_enqueued = wlan_.frames_enqueued();
    result.frames_completed = wlan_.frames_completed();
    std::uint64_t pending = 0;
    for (int i = 0; i < wlan_node_count(cfg_); ++i)
        pending += wlan_.node(i).queue_depth();
    result.frames_pending = pending;
    if (opts_.record_success_intervals)
        result.success_intervals = wlan_.success_intervals();
    return result;
}

RunResult run_scenario(const ScenarioConfig& cfg, RunOptions opts) {
    Simulation s(cfg, std::move(opts));
    return s.run();
}

}  // namespace wcs
