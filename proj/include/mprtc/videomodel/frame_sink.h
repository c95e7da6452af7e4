#ifndef MPRTC_VIDEOMODEL_FRAME_SINK_H_
#define MPRTC_VIDEOMODEL_FRAME_SINK_H_

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_set>
#include <vector>

#include "mprtc/simnet/units.h"
#include "mprtc/transport/wire.h"

namespace mprtc {

// Receiver-side frame reassembly. A frame is delivered once every segment
// has arrived, provided no later frame was delivered first; frames are
// handed out in strictly increasing index order and older incomplete frames
// are abandoned when a newer one completes.
class FrameSink {
 public:
  struct DeliveredFrame {
    uint32_t frame_index = 0;
    Timestamp capture_ts;
    Timestamp delivered_ts;
    int64_t size = 0;
    bool key_frame = false;
  };

  enum class SegmentResult { kNew, kDuplicate, kLate };

  SegmentResult OnSegment(const StreamFrame& segment, Timestamp now);
  // Gives up on an incomplete frame; no-op for complete or unknown frames.
  void Abandon(uint32_t frame_index);
  // Abandons every frame still incomplete (end of session).
  void Flush();

  bool IsPending(uint32_t frame_index) const { return pending_.count(frame_index) > 0; }
  bool IsKeyPending(uint32_t frame_index) const;
  const std::vector<DeliveredFrame>& delivered() const { return delivered_; }
  const std::vector<uint32_t>& abandoned() const { return abandoned_; }
  std::optional<uint32_t> last_delivered() const { return last_delivered_; }
  int64_t delivered_bytes() const { return delivered_bytes_; }
  uint64_t duplicate_segments() const { return duplicates_; }

 private:
  struct Pending {
    Timestamp capture_ts;
    bool key_frame = false;
    std::vector<bool> have;
    int received = 0;
    int64_t bytes = 0;
  };
  void Deliver(uint32_t index, Pending& p, Timestamp now);

  std::map<uint32_t, Pending> pending_;
  std::vector<DeliveredFrame> delivered_;
  std::vector<uint32_t> abandoned_;
  std::unordered_set<uint32_t> abandoned_set_;
  std::optional<uint32_t> last_delivered_;
  int64_t delivered_bytes_ = 0;
  uint64_t duplicates_ = 0;
};

}  // namespace mprtc

#endif  // MPRTC_VIDEOMODEL_FRAME_SINK_H_
