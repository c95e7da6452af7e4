#include "mprtc/scheduler/multipath_scheduler.h"

#include <cstdio>
#include <stdexcept>

namespace mprtc {

MultipathScheduler::MultipathScheduler(int num_subflows) {
  if (num_subflows < 1) throw std::invalid_argument("scheduler needs a subflow");
  subflows_.resize(static_cast<size_t>(num_subflows));
}

TimeDelta MultipathScheduler::UpdateSrtt(int subflow, TimeDelta rtt) {
  Subflow& s = subflows_.at(subflow);
  s.srtt = s.srtt ? *s.srtt * (1 - kSrttGain) + rtt * kSrttGain : rtt;
  return *s.srtt;
}

void MultipathScheduler::ResetSrtt(int subflow, std::optional<TimeDelta> srtt) {
  subflows_.at(subflow).srtt = srtt;
}

void MultipathScheduler::SetBandwidth(int subflow, DataRate bw_es) {
  subflows_.at(subflow).bw = bw_es;
}

TimeDelta MultipathScheduler::ExpectedLatency(int subflow) const {
  const Subflow& s = subflows_.at(subflow);
  if (s.bw.bps() <= 0 || !s.srtt) return TimeDelta::PlusInfinity();
  const int64_t queue_us = s.queued_bytes * 8 * 1000000 / s.bw.bps();
  return *s.srtt / 2 + TimeDelta::Micros(queue_us);
}

TimeDelta MultipathScheduler::MinExpectedLatency() const {
  TimeDelta best = TimeDelta::PlusInfinity();
  for (int i = 0; i < num_subflows(); ++i) best = std::min(best, ExpectedLatency(i));
  return best;
}

int MultipathScheduler::PickSubflow() const {
  int best = -1;
  TimeDelta best_latency = TimeDelta::PlusInfinity();
  for (int i = 0; i < num_subflows(); ++i) {
    const TimeDelta l = ExpectedLatency(i);
    if (l.IsInfinite()) continue;
    if (best < 0 || l < best_latency) {
      best = i;
      best_latency = l;
    }
  }
  return best;
}

void MultipathScheduler::Enqueue(Entry& e, int subflow, bool front, Timestamp now,
                                 bool retransmission) {
  if (log_decisions_) {
    Decision d;
    d.at = now;
    d.segment = e.id;
    d.subflow = subflow;
    d.retransmission = retransmission;
    for (int i = 0; i < num_subflows(); ++i) d.latencies.push_back(ExpectedLatency(i));
    decisions_.push_back(std::move(d));
  }
  Subflow& s = subflows_[subflow];
  e.subflow = subflow;
  e.queued = true;
  s.queued_bytes += static_cast<int64_t>(e.segment.payload_length());
  if (front) {
    s.queue.push_front(e.id);
  } else {
    s.queue.push_back(e.id);
  }
  if (on_queued_) on_queued_(subflow);
}

std::vector<SegmentId> MultipathScheduler::AddSegments(std::vector<StreamFrame> segments,
                                                       Timestamp now) {
  std::vector<SegmentId> ids;
  ids.reserve(segments.size());
  for (StreamFrame& seg : segments) {
    const SegmentId id = next_id_++;
    Entry& e = entries_[id];
    e.id = id;
    e.segment = std::move(seg);
    ids.push_back(id);
    ++stats_.segments_scheduled;
    const int subflow = pending_.empty() ? PickSubflow() : -1;
    if (subflow < 0) {
      pending_.push_back(id);
    } else {
      Enqueue(e, subflow, /*front=*/false, now, /*retransmission=*/false);
    }
  }
  return ids;
}

void MultipathScheduler::AssignPending(Timestamp now) {
  while (!pending_.empty()) {
    const int subflow = PickSubflow();
    if (subflow < 0) return;
    const SegmentId id = pending_.front();
    pending_.pop_front();
    auto it = entries_.find(id);
    if (it == entries_.end()) continue;
    Enqueue(it->second, subflow, /*front=*/false, now, /*retransmission=*/false);
  }
}

std::optional<SegmentId> MultipathScheduler::NextQueued(int subflow, Timestamp now) {
  Subflow& s = subflows_.at(subflow);
  while (!s.queue.empty()) {
    const SegmentId id = s.queue.front();
    Entry& e = entries_.at(id);
    if (IsRetained(id, now)) return id;
    // A retransmission that aged out while queued.
    s.queue.pop_front();
    s.queued_bytes -= static_cast<int64_t>(e.segment.payload_length());
    e.queued = false;
    ++stats_.abandoned;
    Erase(id);
  }
  return std::nullopt;
}

void MultipathScheduler::OnSent(int subflow, SegmentId id, Timestamp now) {
  Subflow& s = subflows_.at(subflow);
  if (s.queue.empty() || s.queue.front() != id)
    throw std::logic_error("segment sent out of queue order");
  s.queue.pop_front();
  Entry& e = entries_.at(id);
  s.queued_bytes -= static_cast<int64_t>(e.segment.payload_length());
  e.queued = false;
  ++e.transmissions;
  ++e.outstanding;
  if (!e.sent) {
    e.sent = true;
    e.first_sent = now;
    sent_order_.emplace_back(now, id);
  }
}

void MultipathScheduler::OnAcked(SegmentId id) {
  auto it = entries_.find(id);
  if (it == entries_.end()) return;
  Entry& e = it->second;
  e.acked = true;
  if (e.outstanding > 0) --e.outstanding;
  // A retransmission still waiting in a queue is no longer needed.
  if (e.queued) {
    Subflow& s = subflows_[e.subflow];
    for (auto q = s.queue.begin(); q != s.queue.end(); ++q) {
      if (*q == id) {
        s.queue.erase(q);
        break;
      }
    }
    s.queued_bytes -= static_cast<int64_t>(e.segment.payload_length());
    e.queued = false;
  }
  Erase(id);
}

bool MultipathScheduler::OnLost(SegmentId id, Timestamp now) {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    ++stats_.abandoned;
    return false;
  }
  Entry& e = it->second;
  if (e.outstanding > 0) --e.outstanding;
  if (e.acked || e.queued || e.outstanding > 0) return false;
  if (!IsRetained(id, now)) {
    ++stats_.abandoned;
    Erase(id);
    return false;
  }
  const int subflow = PickSubflow();
  if (subflow < 0) {
    pending_.push_front(id);
  } else {
    Enqueue(e, subflow, /*front=*/true, now, /*retransmission=*/true);
  }
  ++stats_.retransmissions;
  if (!e.segment.key_frame)
    stats_.max_nonkey_retx_age = std::max(stats_.max_nonkey_retx_age, now - e.first_sent);
  return true;
}

void MultipathScheduler::Evict(Timestamp now) {
  while (!sent_order_.empty() && now - sent_order_.front().first > kCacheTime) {
    const SegmentId id = sent_order_.front().second;
    sent_order_.pop_front();
    auto it = entries_.find(id);
    if (it == entries_.end()) continue;
    const Entry& e = it->second;
    if (e.segment.key_frame) continue;
    if (e.queued) continue;  // Queued for retransmission; leaves when sent.
    ++stats_.age_evictions;
    Erase(id);
  }
}

bool MultipathScheduler::IsRetained(SegmentId id, Timestamp now) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) return false;
  const Entry& e = it->second;
  if (e.acked) return false;
  if (e.segment.key_frame || !e.sent) return true;
  return now - e.first_sent <= kCacheTime;
}

const MultipathScheduler::Entry* MultipathScheduler::entry(SegmentId id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

void MultipathScheduler::Erase(SegmentId id) {
  auto it = entries_.find(id);
  if (it == entries_.end()) return;
  if (it->second.segment.key_frame && !it->second.acked) ++stats_.key_age_evictions;
  entries_.erase(it);
}

void MultipathScheduler::WriteDecisionLog(std::ostream& out) const {
  out << "time_s,segment,subflow,retransmission";
  for (int i = 0; i < num_subflows(); ++i) out << ",lambda_" << i << "_ms";
  out << "\n";
  char buf[64];
  for (const Decision& d : decisions_) {
    std::snprintf(buf, sizeof(buf), "%.6f", d.at.seconds());
    out << buf << ',' << d.segment << ',' << d.subflow << ','
        << (d.retransmission ? 1 : 0);
    for (TimeDelta l : d.latencies) {
      if (l.IsInfinite()) {
        out << ",inf";
      } else {
        std::snprintf(buf, sizeof(buf), ",%.3f", l.ms());
        out << buf;
      }
    }
    out << "\n";
  }
}

}  // namespace mprtc
