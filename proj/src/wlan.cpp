#include "wcs/wlan.hpp"

#include <algorithm>
#include <limits>

#include "wcs/errors.hpp"

namespace wcs {

Wlan::Wlan(Simulator& sim, MacParams params, double initial_rate_mbps,
           std::uint64_t seed, int n_nodes)
    : sim_(sim), params_(params), rate_mbps_(initial_rate_mbps) {
    params_.validate();
    if (!is_supported_rate(initial_rate_mbps))
        throw ConfigError("unsupported initial rate");
    nodes_.reserve(n_nodes);
    ctl_.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i)
        nodes_.emplace_back(i, RngStream(seed, static_cast<std::uint64_t>(i)),
                            &params_);
}

void Wlan::set_rate(double rate_mbps) {
    if (!is_supported_rate(rate_mbps))
        throw ConfigError("unsupported transmission rate");
    rate_mbps_ = rate_mbps;
}

bool Wlan::medium_busy(SimTime t) const {
    return burst_active_ || t < busy_until_;
}

SimTime Wlan::idle_duration(SimTime t) const {
    if (!ever_busy_) return std::numeric_limits<SimTime>::max();
    return t - busy_until_;
}

void Wlan::enqueue(int node, Frame frame) {
    frame.release_time = sim_.now();
    ++enqueued_;
    if (nodes_[node].enqueue(std::move(frame))) start_service(node);
}

void Wlan::start_service(int node) {
    MacNode& n = nodes_[node];
    const SimTime now = sim_.now();
    if (medium_busy(now)) {
        // Defer; the counter stays frozen until the medium turns idle.
        n.defer_with_new_backoff();
        ctl_[node].token++;
        ctl_[node].waiting = false;
        return;
    }
    if (idle_duration(now) >= params_.difs) {
        n.begin_difs_wait();
        const std::uint64_t token = ++ctl_[node].token;
        ctl_[node].waiting = true;
        sim_.schedule(now + params_.difs, EventKind::FrameTxStart, node,
                      [this, node, token] { handle_tx_start(node, token); });
        return;
    }
    n.defer_with_new_backoff();
    enter_backoff_wait(node);
}

void Wlan::enter_backoff_wait(int node) {
    MacNode& n = nodes_[node];
    NodeCtl& c = ctl_[node];
    c.anchor = sim_.now();
    c.waiting = true;
    const std::uint64_t token = ++c.token;
    const SimTime fire = c.anchor + params_.difs +
                         static_cast<SimTime>(n.backoff_remaining()) *
                             params_.slot_time;
    sim_.schedule(fire, EventKind::FrameTxStart, node,
                  [this, node, token] { handle_tx_start(node, token); });
}

void Wlan::handle_tx_start(int node, std::uint64_t token) {
    if (token != ctl_[node].token) return;  // superseded plan
    ctl_[node].waiting = false;
    MacNode& n = nodes_[node];
    const SimTime now = sim_.now();
    if (burst_active_) {
        if (burst_start_ != now)
            throw SimFault("tx_start while a burst is in flight");
        // Simultaneous start: join the collision burst.
        n.begin_transmit(n.state() == MacState::Backoff ? n.backoff_remaining()
                                                        : 0);
        burst_members_.push_back(node);
        return;
    }
    if (now < busy_until_) throw SimFault("tx_start on a busy medium");
    n.begin_transmit(n.state() == MacState::Backoff ? n.backoff_remaining()
                                                    : 0);
    burst_active_ = true;
    burst_start_ = now;
    burst_members_ = {node};
    // Committed after every same-instant tx-start has had a chance to join.
    sim_.schedule(now, EventKind::BurstCommit, node,
                  [this] { handle_burst_commit(); });
}

void Wlan::freeze_contenders(SimTime busy_start) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const int id = static_cast<int>(i);
        if (std::find(burst_members_.begin(), burst_members_.end(), id) !=
            burst_members_.end())
            continue;
        MacNode& n = nodes_[i];
        NodeCtl& c = ctl_[i];
        if (n.state() == MacState::DifsWait) {
            c.token++;
            c.waiting = false;
            n.defer_with_new_backoff();
        } else if (n.state() == MacState::Backoff && c.waiting) {
            c.token++;
            c.waiting = false;
            int elapsed = 0;
            const SimTime countdown_from = c.anchor + params_.difs;
            if (busy_start > countdown_from)
                elapsed = static_cast<int>((busy_start - countdown_from) /
                                           params_.slot_time);
            n.freeze(std::min(elapsed, n.backoff_remaining()));
        }
    }
}

void Wlan::handle_burst_commit() {
    const SimTime t = burst_start_;
    freeze_contenders(t);
    ever_busy_ = true;
    ++busy_gen_;
    const std::uint64_t gen = busy_gen_;
    const SimTime ack_air = ack_airtime(rate_mbps_, params_);

    if (burst_members_.size() == 1) {
        const int node = burst_members_[0];
        MacNode& n = nodes_[node];
        const Frame frame = n.head();
        const SimTime air =
            frame_airtime(frame.payload_bytes, rate_mbps_, params_);
        ctl_[node].attempt_start = t;
        ctl_[node].attempt_end = t + air;
        busy_until_ = t + air + params_.sifs + ack_air;
        n.await_ack();
        if (record_intervals_) intervals_.push_back({t, t + air});
        sim_.schedule(busy_until_, EventKind::Delivery, frame.dst,
                      [this, frame] {
                          if (delivery_) delivery_(frame, sim_.now());
                      });
        sim_.schedule(busy_until_, EventKind::FrameAirtimeEnd, node,
                      [this, node, frame] { handle_ack_received(node, frame); });
    } else {
        // Overlapping transmissions all fail; no ACKs follow.
        SimTime max_end = t;
        for (int node : burst_members_) {
            MacNode& n = nodes_[node];
            const SimTime air =
                frame_airtime(n.head().payload_bytes, rate_mbps_, params_);
            ctl_[node].attempt_start = t;
            ctl_[node].attempt_end = t + air;
            max_end = std::max(max_end, t + air);
            n.await_ack();
            const SimTime timeout =
                t + air + params_.sifs + ack_air + params_.slot_time;
            sim_.schedule(timeout, EventKind::AckTimeout, node,
                          [this, node] { handle_ack_timeout(node); });
        }
        busy_until_ = max_end;
    }
    sim_.schedule(busy_until_, EventKind::MediumIdle, -1,
                  [this, gen] { wake_contenders(gen); });
    burst_active_ = false;
    burst_members_.clear();
}

void Wlan::handle_ack_received(int node, Frame frame) {
    MacNode& n = nodes_[node];
    const int retries = n.retry_count();
    n.ack_received();
    ++completed_;
    if (outcome_) {
        TxOutcome o = classify_outcome(frame, sim_.now(), retries);
        o.tx_start = ctl_[node].attempt_start;
        o.tx_end = ctl_[node].attempt_end;
        outcome_(o);
    }
    if (n.has_frame()) start_service(node);
}

void Wlan::handle_ack_timeout(int node) {
    MacNode& n = nodes_[node];
    if (n.ack_timeout() == MacNode::TimeoutResult::Retry) {
        if (!medium_busy(sim_.now()))
            enter_backoff_wait(node);
        else
            ctl_[node].waiting = false;  // picked up at the next medium-idle
        return;
    }
    const Frame frame = n.take_dropped();
    ++completed_;
    if (outcome_) {
        TxOutcome o = classify_outcome(frame, std::nullopt, params_.retry_limit);
        o.tx_start = ctl_[node].attempt_start;
        o.tx_end = ctl_[node].attempt_end;
        outcome_(o);
    }
    if (n.has_frame()) start_service(node);
}

void Wlan::wake_contenders(std::uint64_t busy_gen) {
    if (busy_gen != busy_gen_) return;  // a newer busy period owns the wakeup
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].state() == MacState::Backoff && !ctl_[i].waiting)
            enter_backoff_wait(static_cast<int>(i));
    }
}

}  // namespace wcs
