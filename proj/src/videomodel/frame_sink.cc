#include "mprtc/videomodel/frame_sink.h"

namespace mprtc {

FrameSink::SegmentResult FrameSink::OnSegment(const StreamFrame& segment,
                                              Timestamp now) {
  const uint32_t index = segment.frame_index;
  if (last_delivered_ && index <= *last_delivered_) {
    // Already delivered, or overtaken by a newer frame.
    return SegmentResult::kLate;
  }
  auto it = pending_.find(index);
  if (it == pending_.end()) {
    // A frame we already gave up on is not resurrected.
    if (abandoned_set_.count(index)) return SegmentResult::kLate;
    Pending p;
    p.capture_ts = segment.capture_ts;
    p.key_frame = segment.key_frame;
    p.have.assign(segment.total_segments, false);
    it = pending_.emplace(index, std::move(p)).first;
  }
  Pending& p = it->second;
  if (segment.segment_index >= p.have.size() || p.have[segment.segment_index]) {
    ++duplicates_;
    return SegmentResult::kDuplicate;
  }
  p.have[segment.segment_index] = true;
  ++p.received;
  p.bytes += static_cast<int64_t>(segment.payload_length());
  if (p.received == static_cast<int>(p.have.size())) Deliver(index, p, now);
  return SegmentResult::kNew;
}

void FrameSink::Deliver(uint32_t index, Pending& p, Timestamp now) {
  DeliveredFrame f;
  f.frame_index = index;
  f.capture_ts = p.capture_ts;
  f.delivered_ts = now;
  f.size = p.bytes;
  f.key_frame = p.key_frame;
  delivered_.push_back(f);
  delivered_bytes_ += p.bytes;
  last_delivered_ = index;
  // Everything older that is still incomplete can no longer be shown.
  auto end = pending_.find(index);
  for (auto it = pending_.begin(); it != end; ++it) abandoned_.push_back(it->first);
  abandoned_set_.insert(abandoned_.end() - std::distance(pending_.begin(), end), abandoned_.end());
  pending_.erase(pending_.begin(), std::next(end));
}

void FrameSink::Abandon(uint32_t frame_index) {
  auto it = pending_.find(frame_index);
  if (it == pending_.end()) return;
  abandoned_.push_back(frame_index);
  abandoned_set_.insert(frame_index);
  pending_.erase(it);
}

void FrameSink::Flush() {
  for (const auto& [index, p] : pending_) {
    abandoned_.push_back(index);
    abandoned_set_.insert(index);
  }
  pending_.clear();
}

bool FrameSink::IsKeyPending(uint32_t frame_index) const {
  auto it = pending_.find(frame_index);
  return it != pending_.end() && it->second.key_frame;
}

}  // namespace mprtc
