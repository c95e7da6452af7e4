#ifndef MPRTC_HARNESS_PATH_CONNECTION_H_
#define MPRTC_HARNESS_PATH_CONNECTION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mprtc/congestion/bbr_controller.h"
#include "mprtc/simnet/network.h"
#include "mprtc/transport/pacer.h"
#include "mprtc/transport/received_packet_manager.h"
#include "mprtc/transport/sent_packet_manager.h"

namespace mprtc {

struct PathConnectionConfig {
  // Tags forward packets for per-flow network statistics; ACKs use
  // flow_id | kAckFlowBit.
  uint32_t flow_id = 0;
  std::string route;
  std::string reverse_route;
  CcVariant variant = CcVariant::kRtcBbr;
  // Upper bound on the pacing rate; zero means none.
  DataRate max_pacing_rate;
  // Send padding when out of data while the controller probes for bandwidth
  // (StartUp or a pacing gain above 1), so probing works for a source that
  // is limited by the application.
  bool probe_padding = false;
  // Keep one controller trace line per tick.
  bool record_cc_trace = false;
};

inline constexpr uint32_t kAckFlowBit = 0x80000000u;

// A sender and receiver bound to one forward route and its reverse route,
// with its own packet-number spaces, congestion controller and pacer.
// Application data is pulled through the callbacks when the pacer and the
// congestion window allow a packet.
class PathConnection {
 public:
  static constexpr TimeDelta kTickInterval = TimeDelta::Millis(50);

  struct Callbacks {
    // Next segment to send, or nullopt; must stay valid until OnSegmentSent.
    std::function<const StreamFrame*(SegmentId*)> peek_segment;
    std::function<void(SegmentId, Timestamp)> on_segment_sent;
    std::function<void(SegmentId)> on_segment_acked;
    std::function<void(SegmentId, Timestamp)> on_segment_lost;
    // Whether the sender still intends to deliver the segment.
    std::function<bool(SegmentId, Timestamp)> is_retained;
    // Every delivery-rate sample while the connection is active.
    std::function<void(const DeliveryRateSample&)> on_sample;
    // Receiver side: a STREAM frame arrived (duplicates included) in a
    // packet sent at `sent`.
    std::function<void(const StreamFrame&, Timestamp now, Timestamp sent)> on_stream_frame;
    // Receiver side: frames that had segments next to a gap the sender gave
    // up on.
    std::function<void(const std::vector<uint32_t>&)> on_gap_frames;
  };

  struct Stats {
    uint64_t packets_sent = 0;
    uint64_t padding_packets = 0;
    uint64_t stop_waiting_only_packets = 0;
    uint64_t acks_sent = 0;
    int64_t bytes_sent = 0;
    uint64_t packets_received = 0;
    uint64_t duplicate_packets = 0;
    // Unique STREAM payload bytes received.
    int64_t payload_bytes_received = 0;
    // One-way delay over received data packets.
    double owd_sum_ms = 0;
    uint64_t owd_count = 0;
    uint64_t losses_detected = 0;
  };

  PathConnection(EventLoop* loop, Network* network, PathConnectionConfig config,
                 std::mt19937_64* rng, Callbacks callbacks);
  PathConnection(const PathConnection&) = delete;
  PathConnection& operator=(const PathConnection&) = delete;
  ~PathConnection();

  // Begins sending (first call) or resumes a paused connection.
  void Activate();
  // Stops sending; in-flight packets are still acknowledged and reported.
  void Pause();
  bool active() const { return active_; }
  bool started() const { return started_; }

  // There may be new data to send.
  void Wake();

  const BbrController& controller() const { return cc_; }
  const SentPacketManager& sent_manager() const { return spm_; }
  const ReceivedPacketManager& received_manager() const { return rpm_; }
  const Stats& stats() const { return stats_; }
  const PathConnectionConfig& config() const { return config_; }
  const std::vector<std::string>& cc_trace() const { return cc_trace_; }

 private:
  void TrySend();
  void ScheduleSend(Timestamp at);
  void SendPacket(Packet packet, std::vector<SegmentId> segments);
  void OnTick();
  void ArmLossTimer();
  void OnLossTimer();
  void HandleLosses(const std::vector<SentPacketRecord>& lost);
  void MaybeSendStandaloneStopWaiting();
  std::optional<PacketNumber> PendingStopWaiting();
  void OnAckPacket(const SimPacket& packet);

  void OnDataPacket(const SimPacket& packet);
  void MaybeSendAck();
  void SendAck();

  EventLoop* loop_;
  Network* network_;
  PathConnectionConfig config_;
  Callbacks cb_;
  BbrController cc_;
  SentPacketManager spm_;
  Pacer pacer_;
  bool active_ = false;
  bool started_ = false;
  std::optional<EventId> send_event_;
  Timestamp send_event_at_;
  std::optional<EventId> tick_event_;
  std::optional<EventId> loss_event_;
  Timestamp loss_event_at_;
  PacketNumber stop_waiting_sent_ = 0;
  std::optional<PacketNumber> last_data_pn_;

  // Receiver state.
  ReceivedPacketManager rpm_;
  PacketNumber next_ack_pn_ = 0;
  std::optional<EventId> ack_event_;
  // Frames carried by recently received packets, for gap attribution.
  std::map<PacketNumber, std::vector<uint32_t>> received_frames_;

  Stats stats_;
  std::vector<std::string> cc_trace_;
  // Guards callbacks scheduled on the loop against use after destruction.
  std::shared_ptr<bool> alive_;
};

}  // namespace mprtc

#endif  // MPRTC_HARNESS_PATH_CONNECTION_H_
