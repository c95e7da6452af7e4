#include "mprtc/transport/sent_packet_manager.h"

#include <algorithm>

namespace mprtc {

PacketNumber SentPacketManager::OnPacketSent(Timestamp now, int64_t size,
                                             std::vector<SegmentId> segments) {
  SentPacketRecord r;
  r.number = next_pn_++;
  r.sent_ts = now;
  r.size = size;
  r.delivered_at_send = delivered_;
  r.app_limited = app_limited_until_ > 0;
  r.segments = std::move(segments);
  bytes_in_flight_ += size;
  const PacketNumber pn = r.number;
  outstanding_.emplace(pn, std::move(r));
  return pn;
}

TimeDelta SentPacketManager::LossDelay() const {
  return srtt_.value_or(kInitialRtt) * kTimeThresholdFactor + kMaxAckDelay;
}

AckResult SentPacketManager::OnAck(const AckFrame& ack, Timestamp now) {
  AckResult result;
  std::optional<PacketNumber> largest_new;
  // Ranges arrive descending; walk them ascending so samples come out in
  // packet-number order.
  for (auto range = ack.ranges.rbegin(); range != ack.ranges.rend(); ++range) {
    auto it = outstanding_.lower_bound(range->start);
    while (it != outstanding_.end() && it->first <= range->end) {
      SentPacketRecord& r = it->second;
      bytes_in_flight_ -= r.size;
      delivered_ += r.size;
      if (app_limited_until_ > 0 && delivered_ > app_limited_until_)
        app_limited_until_ = 0;

      const TimeDelta raw = now - r.sent_ts;
      TimeDelta rtt = raw > ack.ack_delay ? raw - ack.ack_delay : raw;
      rtt = std::max(rtt, TimeDelta::Micros(1));

      DeliveryRateSample s;
      s.bandwidth = DataRate::FromBytesOver(delivered_ - r.delivered_at_send, raw);
      s.rtt = rtt;
      s.is_app_limited = r.app_limited;
      s.prior_delivered = r.delivered_at_send;
      s.delivered = delivered_;
      s.acked_bytes = r.size;
      s.sent_ts = r.sent_ts;
      s.packet_number = r.number;
      result.samples.push_back(s);
      largest_new = r.number;
      result.acked.push_back(std::move(r));
      it = outstanding_.erase(it);
    }
  }
  if (!largest_acked_ || ack.largest_acked > *largest_acked_)
    largest_acked_ = ack.largest_acked;
  if (largest_new) {
    latest_rtt_ = result.samples.back().rtt;
    srtt_ = srtt_ ? *srtt_ * (1 - kSrttGain) + *latest_rtt_ * kSrttGain
                  : *latest_rtt_;
  }
  result.lost = DetectLosses(now);
  for (DeliveryRateSample& s : result.samples) {
    s.inflight = bytes_in_flight_;
    s.has_loss = !result.lost.empty();
  }
  return result;
}

std::vector<SentPacketRecord> SentPacketManager::DetectLosses(Timestamp now) {
  std::vector<SentPacketRecord> lost;
  const TimeDelta delay = LossDelay();
  for (auto it = outstanding_.begin(); it != outstanding_.end();) {
    const SentPacketRecord& r = it->second;
    const bool by_count = largest_acked_ && *largest_acked_ >= kReorderingThreshold &&
                          r.number <= *largest_acked_ - kReorderingThreshold;
    const bool by_time = now - r.sent_ts > delay;
    // Both conditions are monotone in packet number, so the first survivor
    // ends the scan.
    if (!by_count && !by_time) break;
    bytes_in_flight_ -= r.size;
    ++packets_lost_;
    lost.push_back(std::move(it->second));
    it = outstanding_.erase(it);
  }
  return lost;
}

std::vector<SentPacketRecord> SentPacketManager::OnLossTimer(Timestamp now) {
  return DetectLosses(now);
}

std::optional<Timestamp> SentPacketManager::LossTime() const {
  if (outstanding_.empty()) return std::nullopt;
  return outstanding_.begin()->second.sent_ts + LossDelay() + TimeDelta::Micros(1);
}

void SentPacketManager::OnAppLimited() {
  app_limited_until_ = std::max<int64_t>(delivered_ + bytes_in_flight_, 1);
}

PacketNumber SentPacketManager::LeastUnacked(
    const std::function<bool(SegmentId)>& retained) {
  PacketNumber candidate = next_pn_;
  // Packets below the previous answer cannot lower it again.
  for (auto it = outstanding_.lower_bound(least_unacked_); it != outstanding_.end(); ++it) {
    bool keep = false;
    for (SegmentId id : it->second.segments) {
      if (retained(id)) {
        keep = true;
        break;
      }
    }
    if (keep) {
      candidate = it->first;
      break;
    }
  }
  least_unacked_ = std::max(least_unacked_, candidate);
  return least_unacked_;
}

}  // namespace mprtc
