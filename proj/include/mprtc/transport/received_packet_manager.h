#ifndef MPRTC_TRANSPORT_RECEIVED_PACKET_MANAGER_H_
#define MPRTC_TRANSPORT_RECEIVED_PACKET_MANAGER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mprtc/simnet/units.h"
#include "mprtc/transport/wire.h"

namespace mprtc {

// Receiver half of one path connection: tracks which packet numbers arrived
// and decides when to acknowledge them.
class ReceivedPacketManager {
 public:
  static constexpr int kPacketsPerAck = 2;
  static constexpr TimeDelta kAckTimeout = TimeDelta::Millis(10);
  static constexpr size_t kMaxAckRanges = 32;

  // Returns false for duplicates and packets below the stop-waiting
  // threshold, which count as received or abandoned.
  bool OnPacketReceived(PacketNumber pn, Timestamp now);

  // True once kPacketsPerAck packets are waiting to be acknowledged.
  bool ShouldAckNow() const { return unacked_count_ >= kPacketsPerAck; }
  // Deadline of the delayed ACK; nullopt when nothing is waiting.
  std::optional<Timestamp> AckDeadline() const;
  bool HasUnacked() const { return unacked_count_ > 0; }
  // Builds an ACK for everything received at or above the stop-waiting
  // threshold and resets the delayed-ACK state. Requires a received packet.
  AckFrame BuildAck(Timestamp now);

  // Stops waiting for packets below `least_unacked` and returns the gaps
  // given up on, descending. Received packets below it are still reported
  // by the next ACK if none has covered them yet. A regressing value is
  // ignored.
  std::vector<AckRange> OnStopWaiting(PacketNumber least_unacked);

  bool IsReceived(PacketNumber pn) const;
  PacketNumber stop_waiting() const { return stop_waiting_; }
  std::optional<PacketNumber> largest_received() const { return largest_; }

 private:
  // Disjoint inclusive ranges keyed by start.
  std::map<PacketNumber, PacketNumber> received_;
  std::optional<PacketNumber> largest_;
  Timestamp largest_arrival_;
  int unacked_count_ = 0;
  Timestamp first_unacked_arrival_;
  PacketNumber stop_waiting_ = 0;
  // Every received packet below this has been in an ACK.
  PacketNumber reported_below_ = 0;
};

}  // namespace mprtc

#endif  // MPRTC_TRANSPORT_RECEIVED_PACKET_MANAGER_H_
