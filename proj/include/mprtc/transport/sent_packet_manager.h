#ifndef MPRTC_TRANSPORT_SENT_PACKET_MANAGER_H_
#define MPRTC_TRANSPORT_SENT_PACKET_MANAGER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mprtc/simnet/units.h"
#include "mprtc/transport/wire.h"

namespace mprtc {

// Handle of a send-buffer entry carried by a packet.
using SegmentId = uint64_t;

struct SentPacketRecord {
  PacketNumber number = 0;
  Timestamp sent_ts;
  int64_t size = 0;
  // Cumulative delivered bytes on the connection when the packet left.
  int64_t delivered_at_send = 0;
  bool app_limited = false;
  std::vector<SegmentId> segments;
};

struct DeliveryRateSample {
  DataRate bandwidth;
  TimeDelta rtt;
  // Bytes in flight once the whole ACK has been processed.
  int64_t inflight = 0;
  bool has_loss = false;
  bool is_app_limited = false;
  int64_t prior_delivered = 0;
  int64_t delivered = 0;
  int64_t acked_bytes = 0;
  Timestamp sent_ts;
  PacketNumber packet_number = 0;
};

struct AckResult {
  // One sample per newly acknowledged packet, ascending packet number.
  std::vector<DeliveryRateSample> samples;
  std::vector<SentPacketRecord> acked;
  std::vector<SentPacketRecord> lost;
};

// Sender half of one path connection: numbers packets, keeps a record per
// outstanding packet, turns ACK frames into delivery-rate samples and declares
// losses by packet or time threshold.
class SentPacketManager {
 public:
  static constexpr PacketNumber kReorderingThreshold = 3;
  static constexpr double kTimeThresholdFactor = 1.25;
  // Allowance for the receiver's ACK coalescing delay.
  static constexpr TimeDelta kMaxAckDelay = TimeDelta::Millis(10);
  static constexpr TimeDelta kInitialRtt = TimeDelta::Millis(300);
  static constexpr double kSrttGain = 0.85;

  SentPacketManager() = default;

  PacketNumber next_packet_number() const { return next_pn_; }
  // Records a packet with the next packet number and returns that number.
  PacketNumber OnPacketSent(Timestamp now, int64_t size,
                            std::vector<SegmentId> segments);

  // Unknown and already-acknowledged packet numbers are ignored.
  AckResult OnAck(const AckFrame& ack, Timestamp now);
  // Losses found by the time threshold alone.
  std::vector<SentPacketRecord> OnLossTimer(Timestamp now);
  // When OnLossTimer should next run; nullopt with nothing outstanding.
  std::optional<Timestamp> LossTime() const;

  // The sender has run out of data while the window had room: packets sent
  // until everything now in flight is delivered are tagged app-limited.
  void OnAppLimited();
  bool app_limited() const { return app_limited_until_ > 0; }

  // Smallest outstanding packet number holding a segment for which
  // `retained` is true, else the next packet number; never decreases.
  PacketNumber LeastUnacked(const std::function<bool(SegmentId)>& retained);

  int64_t bytes_in_flight() const { return bytes_in_flight_; }
  int64_t delivered() const { return delivered_; }
  size_t outstanding_count() const { return outstanding_.size(); }
  const std::map<PacketNumber, SentPacketRecord>& outstanding() const {
    return outstanding_;
  }
  std::optional<TimeDelta> srtt() const { return srtt_; }
  std::optional<TimeDelta> latest_rtt() const { return latest_rtt_; }
  TimeDelta LossDelay() const;
  uint64_t packets_sent() const { return next_pn_; }
  uint64_t packets_lost() const { return packets_lost_; }

 private:
  std::vector<SentPacketRecord> DetectLosses(Timestamp now);

  PacketNumber next_pn_ = 0;
  std::map<PacketNumber, SentPacketRecord> outstanding_;
  int64_t bytes_in_flight_ = 0;
  int64_t delivered_ = 0;
  int64_t app_limited_until_ = 0;
  std::optional<PacketNumber> largest_acked_;
  std::optional<TimeDelta> srtt_;
  std::optional<TimeDelta> latest_rtt_;
  PacketNumber least_unacked_ = 0;
  uint64_t packets_lost_ = 0;
};

}  // namespace mprtc

#endif  // MPRTC_TRANSPORT_SENT_PACKET_MANAGER_H_
