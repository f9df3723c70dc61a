#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "wcs/rng.hpp"
#include "wcs/sim_time.hpp"

namespace wcs {

// 802.11b DSSS constants (long preamble defaults), overridable from the
// scenario file.
struct MacParams {
    SimTime slot_time = 20;       // us
    SimTime difs = 50;            // us
    SimTime sifs = 10;            // us
    int cw_min = 31;              // slots
    int cw_max = 1023;            // slots
    int retry_limit = 7;          // retransmissions before drop
    SimTime phy_overhead = 192;   // us, PHY preamble+header per frame and ACK
    int mac_header_bytes = 34;
    int ack_bytes = 14;

    void validate() const;  // throws ConfigError

    bool operator==(const MacParams&) const = default;
};

bool is_supported_rate(double rate_mbps);

// ceil((payload + mac_header) * 8 / rate) + phy_overhead, in us.
SimTime frame_airtime(int payload_bytes, double rate_mbps, const MacParams& p);
SimTime ack_airtime(double rate_mbps, const MacParams& p);

enum class FrameKind { Sensor, Command, Interference };
const char* frame_kind_name(FrameKind k);

struct Frame {
    std::uint64_t id = 0;
    FrameKind kind = FrameKind::Interference;
    int loop_id = -1;               // -1 for interference frames
    std::uint64_t sample_id = 0;    // control frames: the sample they serve
    int payload_bytes = 1024;
    SimTime release_time = 0;
    SimTime deadline = 0;           // absolute; 0 = no deadline (interference)
    int src = -1;
    int dst = -1;
    double carried_y = 0.0;         // sensor frames: plant output at sampling
    double carried_u = 0.0;         // command frames: control value
};

enum class FrameFate { DeliveredOnTime, DeliveredLate, Dropped };
const char* frame_fate_name(FrameFate f);

struct TxOutcome {
    std::uint64_t frame_id = 0;
    FrameKind kind = FrameKind::Interference;
    int loop_id = -1;
    std::uint64_t sample_id = 0;
    FrameFate fate = FrameFate::Dropped;
    SimTime release_time = 0;
    SimTime delivery_time = 0;   // valid unless dropped
    int retries = 0;
    SimTime tx_start = 0;        // data portion of the final attempt
    SimTime tx_end = 0;
};

// Dropped frames miss (class 1); deliveries strictly past the deadline miss
// (class 2); delivery exactly at the deadline is on time. Frames without a
// deadline are on time whenever delivered.
TxOutcome classify_outcome(const Frame& frame, std::optional<SimTime> delivery,
                           int retries);

// Resolves a set of transmission intervals on the shared channel: a
// transmission succeeds iff no other transmission overlaps it in time.
// No capture effect.
struct TxInterval {
    SimTime start = 0;
    SimTime end = 0;  // exclusive
};
std::vector<bool> resolve_channel(const std::vector<TxInterval>& txs);

enum class MacState { Idle, DifsWait, Backoff, Transmitting, AwaitAck };
const char* mac_state_name(MacState s);

// Per-node DCF state machine. Holds the FIFO queue, contention window,
// backoff counter and retry count; all transitions validate the current
// state and throw SimFault on an impossible (state, trigger) pair. Timing
// (when slots elapse, when the medium turns busy) lives in the Wlan
// coordinator, which drives these transitions.
class MacNode {
  public:
    MacNode(int id, RngStream rng, const MacParams* params);

    int id() const { return id_; }
    MacState state() const { return state_; }
    bool has_frame() const { return !queue_.empty(); }
    std::size_t queue_depth() const { return queue_.size(); }
    const Frame& head() const;
    int backoff_remaining() const { return backoff_remaining_; }
    int cw() const { return cw_; }
    int retry_count() const { return retry_count_; }

    // Returns true if the node was idle with an empty queue, i.e. service
    // for this frame should start now.
    bool enqueue(Frame f);

    // Idle -> DifsWait (uncontended immediate access path).
    void begin_difs_wait();

    // Idle/DifsWait -> Backoff with a fresh uniform draw in [0, cw].
    void defer_with_new_backoff();

    // Credit fully elapsed idle slots against the backoff counter (the
    // counter is frozen while the medium is busy).
    void freeze(int elapsed_slots);

    // DifsWait, or Backoff with the counter exhausted -> Transmitting.
    void begin_transmit(int elapsed_slots = 0);

    // Transmitting -> AwaitAck.
    void await_ack();

    // AwaitAck -> Idle; pops the frame, resets cw and retry count.
    Frame ack_received();

    enum class TimeoutResult { Retry, Drop };

    // AwaitAck -> Backoff (cw doubled, backoff redrawn) or, once the retry
    // limit is exhausted, Idle with the frame popped. The dropped frame is
    // retrievable via take_dropped().
    TimeoutResult ack_timeout();
    Frame take_dropped();

    int draw_backoff();  // uniform in [0, cw], from this node's stream

  private:
    void require(bool cond, const char* what) const;

    int id_;
    RngStream rng_;
    const MacParams* params_;
    MacState state_ = MacState::Idle;
    std::deque<Frame> queue_;
    int backoff_remaining_ = 0;
    int cw_;
    int retry_count_ = 0;
    std::optional<Frame> dropped_;
};

}  // namespace wcs
