#include "mprtc/transport/packetizer.h"

#include <algorithm>
#include <stdexcept>

namespace mprtc {

std::vector<StreamFrame> Packetize(const FrameDescriptor& frame,
                                   uint64_t stream_offset, int64_t budget) {
  if (frame.size <= 0) throw std::invalid_argument("cannot packetize an empty frame");
  if (budget <= 0) throw std::invalid_argument("payload budget must be positive");
  const int64_t count = (frame.size + budget - 1) / budget;
  if (count > 0xFFFF) throw std::invalid_argument("frame needs too many segments");

  std::vector<StreamFrame> out;
  out.reserve(static_cast<size_t>(count));
  int64_t remaining = frame.size;
  for (int64_t i = 0; i < count; ++i) {
    const int64_t len = std::min(budget, remaining);
    StreamFrame s;
    s.stream_offset = stream_offset;
    s.frame_index = frame.frame_index;
    s.capture_ts = frame.capture_ts;
    s.total_segments = static_cast<uint16_t>(count);
    s.segment_index = static_cast<uint16_t>(i);
    s.key_frame = frame.key_frame;
    // Low byte of the frame index makes payloads distinguishable in dumps.
    s.payload.assign(static_cast<size_t>(len), static_cast<uint8_t>(frame.frame_index));
    out.push_back(std::move(s));
    stream_offset += static_cast<uint64_t>(len);
    remaining -= len;
  }
  return out;
}

}  // namespace mprtc
