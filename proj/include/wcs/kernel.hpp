#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "wcs/sim_time.hpp"

namespace wcs {

// Event classification, used only for the optional trace dump.
enum class EventKind {
    SamplingTick,
    FrameTxStart,
    BurstCommit,
    FrameAirtimeEnd,
    AckTimeout,
    MediumIdle,
    Delivery,
    DeadlineExpiry,
    DetectorTick,
    InterferenceEmission,
    RateChange,
    ReferenceStep,
};

const char* event_kind_name(EventKind k);

struct Event {
    SimTime fire_time = 0;
    std::uint64_t seq = 0;  // insertion order, breaks ties at equal fire_time
    EventKind kind = EventKind::SamplingTick;
    int node = -1;
    std::function<void()> action;
};

// Deterministic discrete-event engine. Single-threaded per run; independent
// runs may execute concurrently on separate Simulator instances.
class Simulator {
  public:
    using TraceFn = std::function<void(const Event&)>;

    SimTime now() const { return now_; }

    // fire_time must be >= now(); scheduling in the past is a simulation bug.
    void schedule(SimTime fire_time, EventKind kind, int node,
                  std::function<void()> action);

    // Pops and returns the globally minimal (fire_time, seq) event, advancing
    // the clock to its fire time. Does not run the action.
    std::optional<Event> pop_next();

    // Dispatches events until the queue is drained or the next event fires
    // after `horizon`. Events at exactly `horizon` are dispatched.
    void run_until(SimTime horizon);

    void set_trace(TraceFn fn) { trace_ = std::move(fn); }

    std::uint64_t scheduled_count() const { return scheduled_; }
    std::uint64_t dispatched_count() const { return dispatched_; }
    std::size_t pending_count() const { return queue_.size(); }

  private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
            return a.seq > b.seq;
        }
    };

    SimTime now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t scheduled_ = 0;
    std::uint64_t dispatched_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    TraceFn trace_;
};

}  // namespace wcs
