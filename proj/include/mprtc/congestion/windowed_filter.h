#ifndef MPRTC_CONGESTION_WINDOWED_FILTER_H_
#define MPRTC_CONGESTION_WINDOWED_FILTER_H_

#include <cstdint>
#include <deque>
#include <optional>

#include "mprtc/simnet/units.h"

namespace mprtc {

// Exact running maximum over the last `window` round trips. Entries are
// pruned only when a new sample is inserted, so the estimate is held while
// nothing is inserted.
class MaxBandwidthFilter {
 public:
  explicit MaxBandwidthFilter(uint64_t window_rounds) : window_(window_rounds) {}

  void Update(DataRate sample, uint64_t round);
  DataRate best() const {
    return entries_.empty() ? DataRate::Zero() : entries_.front().value;
  }
  void Reset() { entries_.clear(); }

 private:
  struct Entry {
    uint64_t round;
    DataRate value;
  };
  uint64_t window_;
  // Values strictly decreasing front to back.
  std::deque<Entry> entries_;
};

// Minimum RTT over a sliding time window, plus the classic BBR staleness
// stamp: the time the held minimum was last matched or replaced.
class MinRttFilter {
 public:
  explicit MinRttFilter(TimeDelta window) : window_(window) {}

  // Returns true when the held minimum had gone stale (older than the window)
  // before this sample; the sample then becomes the held minimum.
  bool Update(TimeDelta rtt, Timestamp now);

  std::optional<TimeDelta> min_rtt() const {
    if (entries_.empty()) return std::nullopt;
    return entries_.front().rtt;
  }
  bool IsStale(Timestamp now) const {
    return has_stamp_ && now - stamp_ > window_;
  }
  Timestamp stamp() const { return stamp_; }
  // Treat the current estimate as freshly validated.
  void Refresh(Timestamp now) { stamp_ = now; }
  // Moves every stored time forward, freezing the filter across a pause.
  void ShiftTime(TimeDelta delta);

 private:
  struct Entry {
    Timestamp at;
    TimeDelta rtt;
  };
  TimeDelta window_;
  // RTTs strictly increasing front to back.
  std::deque<Entry> entries_;
  bool has_stamp_ = false;
  TimeDelta held_;
  Timestamp stamp_;
};

}  // namespace mprtc

#endif  // MPRTC_CONGESTION_WINDOWED_FILTER_H_
