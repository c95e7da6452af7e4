#include "mprtc/congestion/windowed_filter.h"

namespace mprtc {

void MaxBandwidthFilter::Update(DataRate sample, uint64_t round) {
  while (!entries_.empty() && entries_.back().value <= sample) entries_.pop_back();
  entries_.push_back({round, sample});
  while (entries_.front().round + window_ <= round) entries_.pop_front();
}

bool MinRttFilter::Update(TimeDelta rtt, Timestamp now) {
  while (!entries_.empty() && now - entries_.front().at > window_)
    entries_.pop_front();
  while (!entries_.empty() && entries_.back().rtt >= rtt) entries_.pop_back();
  entries_.push_back({now, rtt});

  const bool stale = IsStale(now);
  if (!has_stamp_ || stale || rtt <= held_) {
    held_ = rtt;
    stamp_ = now;
    has_stamp_ = true;
  }
  return stale;
}

void MinRttFilter::ShiftTime(TimeDelta delta) {
  for (Entry& e : entries_) e.at += delta;
  stamp_ += delta;
}

}  // namespace mprtc
