#ifndef MPRTC_SCHEDULER_MULTIPATH_SCHEDULER_H_
#define MPRTC_SCHEDULER_MULTIPATH_SCHEDULER_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "mprtc/simnet/units.h"
#include "mprtc/transport/sent_packet_manager.h"
#include "mprtc/transport/wire.h"

namespace mprtc {

// Send buffer shared by all subflows. Each new segment goes to the subflow
// with the smallest expected arrival latency SRTT/2 + Q*8/bw. Key-frame
// segments stay buffered until acknowledged; other segments are kept for at
// most kCacheTime after their first transmission.
class MultipathScheduler {
 public:
  static constexpr double kSrttGain = 0.85;
  static constexpr TimeDelta kCacheTime = TimeDelta::Millis(400);

  struct Entry {
    SegmentId id = 0;
    StreamFrame segment;
    int subflow = -1;
    bool queued = false;
    bool sent = false;
    bool acked = false;
    Timestamp first_sent;
    int transmissions = 0;
    // Packets carrying this segment that are neither acked nor lost.
    int outstanding = 0;
  };

  struct Decision {
    Timestamp at;
    SegmentId segment = 0;
    int subflow = -1;
    bool retransmission = false;
    std::vector<TimeDelta> latencies;
  };

  struct Stats {
    uint64_t segments_scheduled = 0;
    uint64_t retransmissions = 0;
    // Lost segments no longer in the buffer (given up on).
    uint64_t abandoned = 0;
    uint64_t age_evictions = 0;
    // Must stay zero: key-frame segments evicted without an ACK.
    uint64_t key_age_evictions = 0;
    // Oldest non-key segment age at a retransmission.
    TimeDelta max_nonkey_retx_age = TimeDelta::Zero();
  };

  explicit MultipathScheduler(int num_subflows);

  int num_subflows() const { return static_cast<int>(subflows_.size()); }

  // SRTT = (1 - 0.85) * SRTT + 0.85 * rtt; the first sample initializes it.
  TimeDelta UpdateSrtt(int subflow, TimeDelta rtt);
  // Replaces the SRTT, e.g. after the subflow moved to another path.
  void ResetSrtt(int subflow, std::optional<TimeDelta> srtt);
  std::optional<TimeDelta> srtt(int subflow) const { return subflows_.at(subflow).srtt; }
  // Estimated bandwidth of the subflow's active path.
  void SetBandwidth(int subflow, DataRate bw_es);
  DataRate bandwidth(int subflow) const { return subflows_.at(subflow).bw; }

  // SRTT/2 + Q*8/bw; PlusInfinity when bw is zero or no SRTT is known.
  TimeDelta ExpectedLatency(int subflow) const;
  // Minimum over subflows; PlusInfinity when none is schedulable.
  TimeDelta MinExpectedLatency() const;

  // Buffers the segments and assigns each in order to the subflow of least
  // expected latency, updating Q after every assignment. Ties go to the
  // lowest subflow id. Segments wait unassigned while no subflow is
  // schedulable. Returns the ids in order.
  std::vector<SegmentId> AddSegments(std::vector<StreamFrame> segments, Timestamp now);
  // Assigns segments that were waiting for a schedulable subflow.
  void AssignPending(Timestamp now);

  // Next segment queued on the subflow, without dequeuing it. Queued
  // retransmissions of non-key segments past kCacheTime are dropped first.
  std::optional<SegmentId> NextQueued(int subflow, Timestamp now);
  // Dequeues the segment and marks it sent at `now`.
  void OnSent(int subflow, SegmentId id, Timestamp now);
  void OnAcked(SegmentId id);
  // A packet carrying `id` was declared lost. Retransmits when the segment is
  // still buffered and no other copy is outstanding; returns true if so.
  bool OnLost(SegmentId id, Timestamp now);
  // Drops acked entries and non-key entries sent more than kCacheTime ago.
  void Evict(Timestamp now);

  // Buffered, unacknowledged and, for non-key segments, first sent no more
  // than kCacheTime ago.
  bool IsRetained(SegmentId id, Timestamp now) const;
  const Entry* entry(SegmentId id) const;
  int64_t queued_bytes(int subflow) const { return subflows_.at(subflow).queued_bytes; }
  size_t queue_length(int subflow) const { return subflows_.at(subflow).queue.size(); }
  size_t pending_count() const { return pending_.size(); }
  size_t buffer_size() const { return entries_.size(); }
  const Stats& stats() const { return stats_; }

  void set_decision_logging(bool on) { log_decisions_ = on; }
  const std::vector<Decision>& decisions() const { return decisions_; }
  // "time_s,segment,subflow,retransmission,lambda_0_ms,..."
  void WriteDecisionLog(std::ostream& out) const;

  // Called when a segment lands on a subflow queue.
  void set_on_queued(std::function<void(int subflow)> fn) { on_queued_ = std::move(fn); }

 private:
  struct Subflow {
    std::optional<TimeDelta> srtt;
    DataRate bw;
    int64_t queued_bytes = 0;
    std::deque<SegmentId> queue;
  };

  // Returns -1 when no subflow is schedulable.
  int PickSubflow() const;
  void Enqueue(Entry& e, int subflow, bool front, Timestamp now, bool retransmission);
  void Erase(SegmentId id);

  std::vector<Subflow> subflows_;
  std::unordered_map<SegmentId, Entry> entries_;
  std::deque<SegmentId> pending_;
  // First-send order, for age eviction.
  std::deque<std::pair<Timestamp, SegmentId>> sent_order_;
  SegmentId next_id_ = 0;
  Stats stats_;
  bool log_decisions_ = false;
  std::vector<Decision> decisions_;
  std::function<void(int)> on_queued_;
};

}  // namespace mprtc

#endif  // MPRTC_SCHEDULER_MULTIPATH_SCHEDULER_H_
