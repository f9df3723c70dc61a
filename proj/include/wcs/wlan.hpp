#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wcs/kernel.hpp"
#include "wcs/mac.hpp"
#include "wcs/sim_time.hpp"

namespace wcs {

// Single-cell DCF channel coordinator. All nodes hear all nodes; there is no
// capture effect, no hidden terminals and no bit errors, so losses arise
// only from collisions and retry exhaustion.
//
// Contention is event-driven rather than slot-ticked: when a node enters
// backoff it projects its transmit instant (anchor + DIFS + slots) and
// schedules a single tx-start event. Any transmission starting earlier
// freezes the other contenders, crediting the slots that fully elapsed;
// they re-project when the medium turns idle again. Transmissions that
// start at the same microsecond collide.
class Wlan {
  public:
    using DeliveryFn = std::function<void(const Frame&, SimTime)>;
    using OutcomeFn = std::function<void(const TxOutcome&)>;

    Wlan(Simulator& sim, MacParams params, double initial_rate_mbps,
         std::uint64_t seed, int n_nodes);

    void set_rate(double rate_mbps);
    double rate() const { return rate_mbps_; }
    const MacParams& params() const { return params_; }

    void enqueue(int node, Frame frame);

    void on_delivery(DeliveryFn fn) { delivery_ = std::move(fn); }
    void on_outcome(OutcomeFn fn) { outcome_ = std::move(fn); }

    const MacNode& node(int id) const { return nodes_[id]; }

    std::uint64_t frames_enqueued() const { return enqueued_; }
    std::uint64_t frames_completed() const { return completed_; }

    // Data portions of successful transmissions, for overlap auditing.
    void record_success_intervals(bool on) { record_intervals_ = on; }
    const std::vector<TxInterval>& success_intervals() const {
        return intervals_;
    }

  private:
    struct NodeCtl {
        std::uint64_t token = 0;     // invalidates stale tx-start events
        bool waiting = false;        // a valid tx-start event is pending
        SimTime anchor = 0;          // start of this node's current idle wait
        SimTime attempt_start = 0;   // data tx start of the current attempt
        SimTime attempt_end = 0;
    };

    bool medium_busy(SimTime t) const;
    SimTime idle_duration(SimTime t) const;
    void start_service(int node);
    void enter_backoff_wait(int node);   // schedule projected tx start
    void handle_tx_start(int node, std::uint64_t token);
    void handle_burst_commit();
    void handle_ack_received(int node, Frame frame);
    void handle_ack_timeout(int node);
    void wake_contenders(std::uint64_t busy_gen);
    void freeze_contenders(SimTime busy_start);

    Simulator& sim_;
    MacParams params_;
    double rate_mbps_;
    std::vector<MacNode> nodes_;
    std::vector<NodeCtl> ctl_;
    DeliveryFn delivery_;
    OutcomeFn outcome_;

    SimTime busy_until_ = 0;
    bool ever_busy_ = false;
    std::uint64_t busy_gen_ = 0;   // distinguishes successive busy periods
    bool burst_active_ = false;
    SimTime burst_start_ = 0;
    std::vector<int> burst_members_;

    std::uint64_t enqueued_ = 0;
    std::uint64_t completed_ = 0;
    bool record_intervals_ = false;
    std::vector<TxInterval> intervals_;
};

}  // namespace wcs
