#ifndef MPRTC_TRANSPORT_WIRE_H_
#define MPRTC_TRANSPORT_WIRE_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "mprtc/simnet/units.h"

namespace mprtc {

// Wire layout, all integers big-endian:
//   packet       = [u8 flags][u64 packet_number][frames...][zero padding]
//   STREAM       = [0x01][u64 offset][u16 length][u32 frame_index]
//                  [u64 capture_ts_us][u16 total_segments][u16 segment_index]
//                  [u8 key_flag][payload]
//   ACK          = [0x02][u64 largest_acked][u32 ack_delay_us][u8 range_count]
//                  [(u64 start, u64 end)...]
//   STOP_WAITING = [0x03][u64 least_unacked]
// Flag bit 0 marks a padded packet: frame parsing stops at the first zero
// byte and the rest of the datagram must be zero.

using PacketNumber = uint64_t;

enum class FrameType : uint8_t {
  kStream = 0x01,
  kAck = 0x02,
  kStopWaiting = 0x03,
};

inline constexpr uint8_t kFlagPadded = 0x01;

inline constexpr size_t kPacketHeaderSize = 1 + 8;
inline constexpr size_t kStreamFrameHeaderSize = 1 + 8 + 2 + 4 + 8 + 2 + 2 + 1;
inline constexpr size_t kStopWaitingFrameSize = 1 + 8;
inline constexpr size_t kAckFrameHeaderSize = 1 + 8 + 4 + 1;
inline constexpr size_t kAckRangeSize = 16;
inline constexpr size_t kMaxAckRanges = 255;

struct StreamFrame {
  uint64_t stream_offset = 0;
  uint32_t frame_index = 0;
  Timestamp capture_ts;
  uint16_t total_segments = 1;
  uint16_t segment_index = 0;
  bool key_frame = false;
  std::vector<uint8_t> payload;

  size_t payload_length() const { return payload.size(); }
  bool operator==(const StreamFrame&) const = default;
};

// Inclusive range of acknowledged packet numbers.
struct AckRange {
  PacketNumber start = 0;
  PacketNumber end = 0;
  bool operator==(const AckRange&) const = default;
};

struct AckFrame {
  PacketNumber largest_acked = 0;
  TimeDelta ack_delay;
  // Disjoint, sorted descending, all <= largest_acked.
  std::vector<AckRange> ranges;

  bool Acks(PacketNumber pn) const;
  bool operator==(const AckFrame&) const = default;
};

struct StopWaitingFrame {
  PacketNumber least_unacked = 0;
  bool operator==(const StopWaitingFrame&) const = default;
};

using Frame = std::variant<StreamFrame, AckFrame, StopWaitingFrame>;

struct Packet {
  PacketNumber packet_number = 0;
  std::vector<Frame> frames;
  // Trailing zero bytes; non-zero sets the padded flag.
  size_t padding = 0;

  bool operator==(const Packet&) const = default;
};

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws CodecError when a field does not fit its wire width or an ACK
// frame's ranges are malformed.
std::vector<uint8_t> EncodePacket(const Packet& packet);
// Throws CodecError on truncation, unknown frame types, unknown flag bits or
// range violations. Never returns a partial packet.
Packet DecodePacket(std::span<const uint8_t> data);

// Encoded size without materializing the bytes.
size_t EncodedSize(const Packet& packet);

}  // namespace mprtc

#endif  // MPRTC_TRANSPORT_WIRE_H_
