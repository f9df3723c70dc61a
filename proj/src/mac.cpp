#include "wcs/mac.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcs/errors.hpp"

namespace wcs {

void MacParams::validate() const {
    if (slot_time == 0 || difs == 0 || sifs == 0)
        throw ConfigError("mac: slot/difs/sifs must be positive");
    if (cw_min < 0 || cw_max < cw_min)
        throw ConfigError("mac: requires 0 <= cw_min <= cw_max");
    if (retry_limit < 0) throw ConfigError("mac: retry_limit must be >= 0");
    if (mac_header_bytes < 0 || ack_bytes <= 0)
        throw ConfigError("mac: invalid header/ack sizes");
}

bool is_supported_rate(double rate_mbps) {
    return rate_mbps == 1.0 || rate_mbps == 2.0 || rate_mbps == 5.5 ||
           rate_mbps == 11.0;
}

SimTime frame_airtime(int payload_bytes, double rate_mbps, const MacParams& p) {
    if (!is_supported_rate(rate_mbps))
        throw ConfigError("unsupported transmission rate: " +
                          std::to_string(rate_mbps));
    if (payload_bytes <= 0)
        throw ConfigError("frame payload must be positive");
    const double bits = (payload_bytes + p.mac_header_bytes) * 8.0;
    return static_cast<SimTime>(std::ceil(bits / rate_mbps)) + p.phy_overhead;
}

SimTime ack_airtime(double rate_mbps, const MacParams& p) {
    if (!is_supported_rate(rate_mbps))
        throw ConfigError("unsupported transmission rate: " +
                          std::to_string(rate_mbps));
    const double bits = p.ack_bytes * 8.0;
    return static_cast<SimTime>(std::ceil(bits / rate_mbps)) + p.phy_overhead;
}

const char* frame_kind_name(FrameKind k) {
    switch (k) {
        case FrameKind::Sensor: return "sensor";
        case FrameKind::Command: return "command";
        case FrameKind::Interference: return "interference";
    }
    return "unknown";
}

const char* frame_fate_name(FrameFate f) {
    switch (f) {
        case FrameFate::DeliveredOnTime: return "on_time";
        case FrameFate::DeliveredLate: return "late";
        case FrameFate::Dropped: return "dropped";
    }
    return "unknown";
}

const char* mac_state_name(MacState s) {
    switch (s) {
        case MacState::Idle: return "idle";
        case MacState::DifsWait: return "difs_wait";
        case MacState::Backoff: return "backoff";
        case MacState::Transmitting: return "transmitting";
        case MacState::AwaitAck: return "await_ack";
    }
    return "unknown";
}

TxOutcome classify_outcome(const Frame& frame, std::optional<SimTime> delivery,
                           int retries) {
    TxOutcome o;
    o.frame_id = frame.id;
    o.kind = frame.kind;
    o.loop_id = frame.loop_id;
    o.sample_id = frame.sample_id;
    o.release_time = frame.release_time;
    o.retries = retries;
    if (!delivery) {
        o.fate = FrameFate::Dropped;
    } else {
        o.delivery_time = *delivery;
        // Miss requires strict excess; delivery exactly at the deadline is
        // on time. Frames without a deadline cannot be late.
        const bool late = frame.deadline != 0 && *delivery > frame.deadline;
        o.fate = late ? FrameFate::DeliveredLate : FrameFate::DeliveredOnTime;
    }
    return o;
}

std::vector<bool> resolve_channel(const std::vector<TxInterval>& txs) {
    std::vector<bool> ok(txs.size(), true);
    for (std::size_t i = 0; i < txs.size(); ++i) {
        for (std::size_t j = i + 1; j < txs.size(); ++j) {
            if (txs[i].start < txs[j].end && txs[j].start < txs[i].end) {
                ok[i] = false;
                ok[j] = false;
            }
        }
    }
    return ok;
}

MacNode::MacNode(int id, RngStream rng, const MacParams* params)
    : id_(id), rng_(rng), params_(params), cw_(params->cw_min) {}

const Frame& MacNode::head() const {
    if (queue_.empty()) throw SimFault("MacNode::head: empty queue");
    return queue_.front();
}

void MacNode::require(bool cond, const char* what) const {
    if (!cond)
        throw SimFault(std::string("MacNode ") + std::to_string(id_) + " in " +
                       mac_state_name(state_) + ": " + what);
}

bool MacNode::enqueue(Frame f) {
    const bool start = state_ == MacState::Idle && queue_.empty();
    queue_.push_back(std::move(f));
    return start;
}

void MacNode::begin_difs_wait() {
    require(state_ == MacState::Idle && !queue_.empty(),
            "begin_difs_wait needs an idle node with a queued frame");
    state_ = MacState::DifsWait;
}

int MacNode::draw_backoff() { return rng_.uniform_int(0, cw_); }

void MacNode::defer_with_new_backoff() {
    require((state_ == MacState::Idle || state_ == MacState::DifsWait) &&
                !queue_.empty(),
            "defer_with_new_backoff needs a pending frame outside backoff");
    backoff_remaining_ = draw_backoff();
    state_ = MacState::Backoff;
}

void MacNode::freeze(int elapsed_slots) {
    require(state_ == MacState::Backoff, "freeze outside backoff");
    require(elapsed_slots >= 0 && elapsed_slots <= backoff_remaining_,
            "freeze: elapsed slots exceed remaining backoff");
    backoff_remaining_ -= elapsed_slots;
}

void MacNode::begin_transmit(int elapsed_slots) {
    if (state_ == MacState::Backoff) {
        freeze(elapsed_slots);
        require(backoff_remaining_ == 0,
                "begin_transmit with backoff slots remaining");
    } else {
        require(state_ == MacState::DifsWait,
                "begin_transmit outside difs_wait/backoff");
    }
    state_ = MacState::Transmitting;
}

void MacNode::await_ack() {
    require(state_ == MacState::Transmitting, "await_ack without transmitting");
    state_ = MacState::AwaitAck;
}

Frame MacNode::ack_received() {
    require(state_ == MacState::AwaitAck, "ack_received outside await_ack");
    Frame f = std::move(queue_.front());
    queue_.pop_front();
    cw_ = params_->cw_min;
    retry_count_ = 0;
    backoff_remaining_ = 0;
    state_ = MacState::Idle;
    return f;
}

MacNode::TimeoutResult MacNode::ack_timeout() {
    require(state_ == MacState::AwaitAck, "ack_timeout outside await_ack");
    if (retry_count_ >= params_->retry_limit) {
        dropped_ = std::move(queue_.front());
        queue_.pop_front();
        cw_ = params_->cw_min;
        retry_count_ = 0;
        backoff_remaining_ = 0;
        state_ = MacState::Idle;
        return TimeoutResult::Drop;
    }
    ++retry_count_;
    cw_ = std::min(2 * cw_ + 1, params_->cw_max);
    backoff_remaining_ = draw_backoff();
    state_ = MacState::Backoff;
    return TimeoutResult::Retry;
}

Frame MacNode::take_dropped() {
    require(dropped_.has_value(), "take_dropped without a dropped frame");
    Frame f = std::move(*dropped_);
    dropped_.reset();
    return f;
}

}  // namespace wcs
