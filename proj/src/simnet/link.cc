#include "mprtc/simnet/link.h"

#include <stdexcept>

namespace mprtc {

LinkConfig LinkConfig::WithQueueTime(DataRate capacity, TimeDelta owd,
                                     TimeDelta queue_time) {
  return LinkConfig{capacity, owd, capacity.BytesOver(queue_time)};
}

Link::Link(EventLoop* loop, std::string name, LinkConfig config)
    : Link(loop, std::move(name), config,
           TraceSchedule::Constant(config.capacity)) {}

Link::Link(EventLoop* loop, std::string name, LinkConfig config,
           TraceSchedule capacity)
    : loop_(loop),
      name_(std::move(name)),
      config_(config),
      capacity_(std::move(capacity)) {
  if (config_.queue_capacity_bytes <= 0)
    throw std::invalid_argument("link " + name_ + ": queue capacity must be > 0");
  if (config_.owd < TimeDelta::Zero())
    throw std::invalid_argument("link " + name_ + ": negative delay");
}

bool Link::Send(SimPacket packet, DeliverFn on_arrival) {
  const int64_t size = packet.size();
  LinkStats& flow = MutableFlowStats(packet.flow_id);
  ++stats_.packets_offered;
  ++flow.packets_offered;
  stats_.bytes_offered += size;
  flow.bytes_offered += size;
  if (occupancy_ + size > config_.queue_capacity_bytes) {
    ++stats_.packets_dropped;
    ++flow.packets_dropped;
    if (on_drop_) on_drop_(packet);
    return false;
  }
  occupancy_ += size;
  queue_.push_back(Queued{std::move(packet), std::move(on_arrival)});
  if (!busy_) StartTransmission();
  return true;
}

void Link::StartTransmission() {
  busy_ = true;
  const Timestamp done =
      capacity_.TransmitEnd(loop_->now(), queue_.front().packet.size());
  loop_->Schedule(done, [this] { OnTransmissionDone(); });
}

void Link::OnTransmissionDone() {
  Queued head = std::move(queue_.front());
  queue_.pop_front();
  occupancy_ -= head.packet.size();
  const uint32_t flow_id = head.packet.flow_id;
  const int64_t size = head.packet.size();
  loop_->ScheduleAfter(
      config_.owd, [this, flow_id, size, q = std::move(head)]() mutable {
        ++stats_.packets_delivered;
        stats_.bytes_delivered += size;
        LinkStats& flow = MutableFlowStats(flow_id);
        ++flow.packets_delivered;
        flow.bytes_delivered += size;
        q.on_arrival(std::move(q.packet));
      });
  if (queue_.empty()) {
    busy_ = false;
  } else {
    StartTransmission();
  }
}

LinkStats& Link::MutableFlowStats(uint32_t flow_id) {
  return per_flow_[flow_id];
}

const LinkStats& Link::flow_stats(uint32_t flow_id) const {
  static const LinkStats kEmpty;
  auto it = per_flow_.find(flow_id);
  return it != per_flow_.end() ? it->second : kEmpty;
}

}  // namespace mprtc
