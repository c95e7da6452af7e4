#include "mprtc/transport/received_packet_manager.h"

#include <algorithm>
#include <stdexcept>

namespace mprtc {

bool ReceivedPacketManager::OnPacketReceived(PacketNumber pn, Timestamp now) {
  if (IsReceived(pn)) return false;
  {
    auto next = received_.upper_bound(pn);
    const bool joins_next = next != received_.end() && next->first == pn + 1;
    auto prev = next == received_.begin() ? received_.end() : std::prev(next);
    const bool joins_prev = prev != received_.end() && prev->second + 1 == pn;
    if (joins_prev && joins_next) {
      prev->second = next->second;
      received_.erase(next);
    } else if (joins_prev) {
      prev->second = pn;
    } else if (joins_next) {
      const PacketNumber end = next->second;
      received_.erase(next);
      received_.emplace(pn, end);
    } else {
      received_.emplace(pn, pn);
    }
  }
  if (!largest_ || pn > *largest_) {
    largest_ = pn;
    largest_arrival_ = now;
  }
  if (unacked_count_ == 0) first_unacked_arrival_ = now;
  ++unacked_count_;
  return true;
}

std::optional<Timestamp> ReceivedPacketManager::AckDeadline() const {
  if (unacked_count_ == 0) return std::nullopt;
  return first_unacked_arrival_ + kAckTimeout;
}

AckFrame ReceivedPacketManager::BuildAck(Timestamp now) {
  if (!largest_) throw std::logic_error("no packet received yet");
  AckFrame ack;
  ack.largest_acked = *largest_;
  ack.ack_delay = now - largest_arrival_;
  for (auto it = received_.rbegin();
       it != received_.rend() && ack.ranges.size() < kMaxAckRanges; ++it) {
    ack.ranges.push_back({it->first, it->second});
  }
  unacked_count_ = 0;
  reported_below_ = *largest_ + 1;
  return ack;
}

std::vector<AckRange> ReceivedPacketManager::OnStopWaiting(
    PacketNumber least_unacked) {
  std::vector<AckRange> gaps;
  if (least_unacked <= stop_waiting_) return gaps;
  // Walk received ranges below the new threshold collecting the holes.
  PacketNumber cursor = stop_waiting_;
  for (auto it = received_.begin(); it != received_.end() && it->first < least_unacked;
       ++it) {
    if (it->second < cursor) continue;
    if (it->first > cursor) gaps.push_back({cursor, it->first - 1});
    cursor = it->second + 1;
  }
  if (cursor < least_unacked) gaps.push_back({cursor, least_unacked - 1});
  std::reverse(gaps.begin(), gaps.end());

  stop_waiting_ = least_unacked;
  // Packets not yet covered by an ACK stay until one reports them.
  const PacketNumber prune = std::min(least_unacked, reported_below_);
  while (!received_.empty() && received_.begin()->second < prune)
    received_.erase(received_.begin());
  if (!received_.empty() && received_.begin()->first < prune) {
    const PacketNumber end = received_.begin()->second;
    received_.erase(received_.begin());
    received_.emplace(prune, end);
  }
  return gaps;
}

bool ReceivedPacketManager::IsReceived(PacketNumber pn) const {
  auto it = received_.upper_bound(pn);
  if (pn < stop_waiting_) return true;
  if (it == received_.begin()) return false;
  --it;
  return pn <= it->second;
}

}  // namespace mprtc
