#ifndef MPRTC_SIMNET_LINK_H_
#define MPRTC_SIMNET_LINK_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mprtc/simnet/event_loop.h"
#include "mprtc/simnet/trace.h"
#include "mprtc/simnet/units.h"

namespace mprtc {

// A datagram in flight through the simulated network. `data` holds the
// encoded wire bytes; its length is the size that occupies queues and links.
struct SimPacket {
  std::vector<uint8_t> data;
  uint32_t flow_id = 0;
  // Sender timestamp carried out of band for one-way delay measurement.
  Timestamp sent_time;

  int64_t size() const { return static_cast<int64_t>(data.size()); }
};

struct LinkConfig {
  DataRate capacity;
  TimeDelta owd;
  int64_t queue_capacity_bytes = 0;

  // Queue sized as capacity x queue_time, in bytes.
  static LinkConfig WithQueueTime(DataRate capacity, TimeDelta owd,
                                  TimeDelta queue_time);
};

struct LinkStats {
  uint64_t packets_offered = 0;
  uint64_t packets_dropped = 0;
  uint64_t packets_delivered = 0;
  int64_t bytes_offered = 0;
  int64_t bytes_delivered = 0;

  uint64_t packets_in_flight() const {
    return packets_offered - packets_dropped - packets_delivered;
  }
};

// One direction of a point-to-point link: a droptail byte queue feeding a
// serializer whose rate follows a capacity schedule, followed by a fixed
// propagation delay. The queue occupancy counts every byte that has been
// accepted but has not finished serialization.
class Link {
 public:
  using DeliverFn = std::function<void(SimPacket)>;
  using DropFn = std::function<void(const SimPacket&)>;

  Link(EventLoop* loop, std::string name, LinkConfig config);
  Link(EventLoop* loop, std::string name, LinkConfig config,
       TraceSchedule capacity);
  Link(const Link&) = delete;
  Link& operator=(const Link&) = delete;

  // Returns false when the packet does not fit in the queue; it is then
  // dropped and `on_drop` (if set) is notified.
  bool Send(SimPacket packet, DeliverFn on_arrival);

  void set_drop_observer(DropFn fn) { on_drop_ = std::move(fn); }

  const std::string& name() const { return name_; }
  const LinkConfig& config() const { return config_; }
  const TraceSchedule& capacity() const { return capacity_; }
  int64_t queue_occupancy() const { return occupancy_; }
  const LinkStats& stats() const { return stats_; }
  const LinkStats& flow_stats(uint32_t flow_id) const;

 private:
  struct Queued {
    SimPacket packet;
    DeliverFn on_arrival;
  };
  void StartTransmission();
  void OnTransmissionDone();
  LinkStats& MutableFlowStats(uint32_t flow_id);

  EventLoop* loop_;
  std::string name_;
  LinkConfig config_;
  TraceSchedule capacity_;
  std::deque<Queued> queue_;
  int64_t occupancy_ = 0;
  bool busy_ = false;
  LinkStats stats_;
  std::map<uint32_t, LinkStats> per_flow_;
  DropFn on_drop_;
};

}  // namespace mprtc

#endif  // MPRTC_SIMNET_LINK_H_
