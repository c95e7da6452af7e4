#ifndef MPRTC_TRANSPORT_PACKETIZER_H_
#define MPRTC_TRANSPORT_PACKETIZER_H_

#include <cstdint>
#include <vector>

#include "mprtc/transport/wire.h"

namespace mprtc {

// Total datagram budget per packet.
inline constexpr int64_t kMaxPacketSize = 1200;
// Stream payload that still leaves room for the packet header, one STREAM
// frame header and a piggybacked STOP_WAITING frame.
inline constexpr int64_t kMaxStreamPayload =
    kMaxPacketSize - static_cast<int64_t>(kPacketHeaderSize) -
    static_cast<int64_t>(kStreamFrameHeaderSize) -
    static_cast<int64_t>(kStopWaitingFrameSize);

struct FrameDescriptor {
  uint32_t frame_index = 0;
  Timestamp capture_ts;
  int64_t size = 0;
  bool key_frame = false;
};

// Splits a frame into segments of at most `budget` payload bytes starting at
// `stream_offset`. Payload bytes are synthetic. Throws std::invalid_argument
// for empty frames, a non-positive budget or more than 65535 segments.
std::vector<StreamFrame> Packetize(const FrameDescriptor& frame,
                                   uint64_t stream_offset,
                                   int64_t budget = kMaxStreamPayload);

}  // namespace mprtc

#endif  // MPRTC_TRANSPORT_PACKETIZER_H_
