#include "wcs/kernel.hpp"

#include "wcs/errors.hpp"

namespace wcs {

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::SamplingTick: return "sampling_tick";
        case EventKind::FrameTxStart: return "tx_start";
        case EventKind::BurstCommit: return "burst_commit";
        case EventKind::FrameAirtimeEnd: return "airtime_end";
        case EventKind::AckTimeout: return "ack_timeout";
        case EventKind::MediumIdle: return "medium_idle";
        case EventKind::Delivery: return "delivery";
        case EventKind::DeadlineExpiry: return "deadline_expiry";
        case EventKind::DetectorTick: return "detector_tick";
        case EventKind::InterferenceEmission: return "interference";
        case EventKind::RateChange: return "rate_change";
        case EventKind::ReferenceStep: return "reference_step";
    }
    return "unknown";
}

void Simulator::schedule(SimTime fire_time, EventKind kind, int node,
                         std::function<void()> action) {
    if (fire_time < now_)
        throw SimFault("schedule: fire_time " + std::to_string(fire_time) +
                       " is before now " + std::to_string(now_));
    Event ev;
    ev.fire_time = fire_time;
    ev.seq = next_seq_++;
    ev.kind = kind;
    ev.node = node;
    ev.action = std::move(action);
    queue_.push(std::move(ev));
    ++scheduled_;
}

std::optional<Event> Simulator::pop_next() {
    if (queue_.empty()) return std::nullopt;
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.fire_time;
    ++dispatched_;
    return ev;
}

void Simulator::run_until(SimTime horizon) {
    while (!queue_.empty() && queue_.top().fire_time <= horizon) {
        Event ev = *pop_next();
        if (trace_) trace_(ev);
        if (ev.action) ev.action();
    }
    if (now_ < horizon) now_ = horizon;
}

}  // namespace wcs
