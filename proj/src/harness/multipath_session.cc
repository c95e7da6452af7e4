#include "mprtc/harness/multipath_session.h"

#include <iomanip>
#include <stdexcept>

#include "mprtc/simnet/topology.h"
#include "mprtc/transport/packetizer.h"

namespace mprtc {

namespace {

std::vector<int> SubflowIds(int subflows) {
  std::vector<int> ids;
  for (int s = 0; s < subflows; ++s) ids.push_back(s);
  return ids;
}

std::vector<PathManager::PathInfo> Candidates(int subflows, int paths) {
  std::vector<PathManager::PathInfo> out;
  for (int s = 0; s < subflows; ++s) {
    for (int p = 0; p < paths; ++p) out.push_back({s * paths + p, s});
  }
  return out;
}

// A non-key frame incomplete this long after capture has no segment left in
// the sender's buffer that could still be retransmitted.
constexpr TimeDelta kGapAbandonAge = kFrameDelayLimit + MultipathScheduler::kCacheTime;

}  // namespace

PathScheme ParsePathScheme(const std::string& name) {
  if (name == "ucb") return PathScheme::kUcb;
  if (name == "default") return PathScheme::kDefault;
  if (name == "oracle") return PathScheme::kOracle;
  throw std::invalid_argument("unknown path scheme '" + name + "'");
}

std::string ToString(PathScheme scheme) {
  switch (scheme) {
    case PathScheme::kUcb:
      return "ucb";
    case PathScheme::kDefault:
      return "default";
    case PathScheme::kOracle:
      return "oracle";
  }
  return "?";
}

MultipathSession::MultipathSession(EventLoop* loop, Network* network,
                                   MultipathConfig config, std::mt19937_64* rng)
    : loop_(loop),
      network_(network),
      config_(std::move(config)),
      end_(Timestamp::Zero() + config_.duration),
      active_(static_cast<size_t>(config_.subflows), -1),
      scheduler_(config_.subflows),
      path_manager_(SubflowIds(config_.subflows),
                    Candidates(config_.subflows, config_.paths_per_subflow)),
      encoder_(config_.encoder, rng),
      subflow_rx_(static_cast<size_t>(config_.subflows)) {
  scheduler_.set_decision_logging(config_.log_decisions);
  for (int s = 0; s < config_.subflows; ++s) {
    for (int p = 0; p < config_.paths_per_subflow; ++p) {
      PathConnectionConfig cc;
      cc.flow_id = static_cast<uint32_t>(PathId(s, p) + 1);
      cc.route = PathRouteName(s, p);
      cc.reverse_route = ReverseRouteName(cc.route);
      cc.variant = config_.variant;
      cc.probe_padding = true;
      cc.record_cc_trace = config_.record_cc_trace;

      PathConnection::Callbacks cb;
      cb.peek_segment = [this, s](SegmentId* id) -> const StreamFrame* {
        const std::optional<SegmentId> next = scheduler_.NextQueued(s, loop_->now());
        if (!next) return nullptr;
        *id = *next;
        return &scheduler_.entry(*next)->segment;
      };
      cb.on_segment_sent = [this, s](SegmentId id, Timestamp now) {
        scheduler_.OnSent(s, id, now);
      };
      cb.on_segment_acked = [this](SegmentId id) { scheduler_.OnAcked(id); };
      cb.on_segment_lost = [this](SegmentId id, Timestamp now) { scheduler_.OnLost(id, now); };
      cb.is_retained = [this](SegmentId id, Timestamp now) {
        return scheduler_.IsRetained(id, now);
      };
      cb.on_sample = [this, s, p](const DeliveryRateSample& sample) {
        if (active_[s] != p) return;
        scheduler_.UpdateSrtt(s, sample.rtt);
        scheduler_.SetBandwidth(s, conns_[Index(s, p)]->controller().bw_es());
      };
      cb.on_stream_frame = [this, s](const StreamFrame& f, Timestamp now, Timestamp sent) {
        OnStream(s, f, now, sent);
      };
      cb.on_gap_frames = [this](const std::vector<uint32_t>& f) { OnGapFrames(f); };
      conns_.push_back(std::make_unique<PathConnection>(loop, network, std::move(cc),
                                                        rng, std::move(cb)));
    }
  }
  scheduler_.set_on_queued([this](int s) {
    if (active_[s] >= 0) Active(s).Wake();
  });
  source_ = std::make_unique<VideoSource>(
      loop, &encoder_, [this] { return scheduler_.MinExpectedLatency(); },
      [this](const EncodedFrame& f) { OnEncoded(f); },
      [this](const RawFrame& raw, Timestamp) {
        if (raw.frame_index >= frames_.size()) frames_.resize(raw.frame_index + 1);
        frames_[raw.frame_index].capture_ts = raw.capture_ts;
        frames_[raw.frame_index].dropped = true;
      });
}

void MultipathSession::Start() {
  const Timestamp now = loop_->now();
  OnSlot();
  OnTick();
  source_->Start(now, end_);
}

void MultipathSession::Finish() {
  source_->Stop();
  sink_.Flush();
  const Timestamp end = loop_->now();
  for (RateSeries& r : subflow_rx_) r.PadTo(end);
  total_rx_.PadTo(end);
}

void MultipathSession::OnSlot() {
  const Timestamp now = loop_->now();
  std::vector<int> choice(static_cast<size_t>(config_.subflows), -1);
  std::vector<std::optional<double>> score(choice.size());
  switch (config_.scheme) {
    case PathScheme::kUcb: {
      choice = path_manager_.NextSlot(now);
      const auto& log = path_manager_.log();
      for (size_t i = log.size() - choice.size(); i < log.size(); ++i) {
        for (const auto& sr : log[i].scores) {
          if (sr.path == log[i].chosen) score[static_cast<size_t>(log[i].flowid)] = sr.score;
        }
      }
      for (size_t s = 0; s < choice.size(); ++s) {
        if (choice[s] >= 0) choice[s] -= static_cast<int>(s) * config_.paths_per_subflow;
      }
      break;
    }
    case PathScheme::kDefault:
      for (int& c : choice) c = 0;
      break;
    case PathScheme::kOracle: {
      const Timestamp to = now + config_.slot;
      for (int s = 0; s < config_.subflows; ++s) {
        DataRate best = DataRate::Zero();
        for (int p = 0; p < config_.paths_per_subflow; ++p) {
          const DataRate cap = network_->MeanBottleneck(PathRouteName(s, p), now, to);
          if (choice[s] < 0 || cap > best) {
            best = cap;
            choice[s] = p;
          }
        }
        score[s] = static_cast<double>(best.bps());
      }
      break;
    }
  }
  for (int s = 0; s < config_.subflows; ++s) {
    const int path = choice[s] >= 0 ? choice[s] : active_[s];
    const bool switched = active_[s] >= 0 && path != active_[s];
    slots_.push_back({slot_, now, s, path, switched, score[s]});
    Bind(s, path);
  }
  ++slot_;
  if (now + config_.slot < end_) {
    loop_->Schedule(now + config_.slot, [this] { OnSlot(); });
  }
}

void MultipathSession::Bind(int subflow, int path) {
  if (active_[subflow] == path) return;
  if (active_[subflow] >= 0) {
    Active(subflow).Pause();
    ++switches_;
  }
  active_[subflow] = path;
  PathConnection& conn = Active(subflow);
  scheduler_.ResetSrtt(subflow, conn.sent_manager().srtt());
  scheduler_.SetBandwidth(subflow, conn.controller().bw_es());
  conn.Activate();
  scheduler_.AssignPending(loop_->now());
}

void MultipathSession::OnTick() {
  const Timestamp now = loop_->now();
  std::vector<DataRate> bws;
  for (int s = 0; s < config_.subflows; ++s) {
    const DataRate bw = Active(s).controller().bw_es();
    bws.push_back(bw);
    scheduler_.SetBandwidth(s, bw);
    if (bw > DataRate::Zero()) {
      path_manager_.OnNewBandwidthSample(PathId(s, active_[s]),
                                         static_cast<double>(bw.bps()), now);
    }
  }
  scheduler_.AssignPending(now);
  scheduler_.Evict(now);
  encoder_.SetTargetRate(rate_controller_.OnTick(bws), now);
  for (int s = 0; s < config_.subflows; ++s) Active(s).Wake();
  if (now + kTick < end_) loop_->Schedule(now + kTick, [this] { OnTick(); });
}

void MultipathSession::OnEncoded(const EncodedFrame& frame) {
  if (frame.frame_index >= frames_.size()) frames_.resize(frame.frame_index + 1);
  FrameRecord& r = frames_[frame.frame_index];
  r.capture_ts = frame.capture_ts;
  r.size = frame.size;
  r.key = frame.key_frame;
  r.encoded = true;
  r.rate = frame.rate;
  const FrameDescriptor desc{frame.frame_index, frame.capture_ts, frame.size,
                             frame.key_frame};
  std::vector<StreamFrame> segments = Packetize(desc, offset_);
  offset_ += static_cast<uint64_t>(frame.size);
  scheduler_.AddSegments(std::move(segments), loop_->now());
}

void MultipathSession::OnStream(int subflow, const StreamFrame& s, Timestamp now,
                                Timestamp sent) {
  owd_ms_.Add((now - sent).ms());
  if (sink_.OnSegment(s, now) != FrameSink::SegmentResult::kNew) return;
  const auto bytes = static_cast<int64_t>(s.payload.size());
  subflow_rx_[subflow].Add(now, bytes);
  total_rx_.Add(now, bytes);
}

void MultipathSession::OnGapFrames(const std::vector<uint32_t>& frames) {
  const Timestamp now = loop_->now();
  for (uint32_t idx : frames) {
    if (!sink_.IsPending(idx) || sink_.IsKeyPending(idx)) continue;
    if (idx < frames_.size() && now - frames_[idx].capture_ts > kGapAbandonAge)
      sink_.Abandon(idx);
  }
}

MultipathResult MultipathSession::Result() const {
  MultipathResult r;
  r.throughput = DataRate::FromBytesOver(total_rx_.total_bytes(), config_.duration);
  MeanAccumulator distortion, quality, delay;
  for (const FrameSink::DeliveredFrame& f : sink_.delivered()) {
    delay.Add((f.delivered_ts - f.capture_ts).ms());
    const DataRate rate = frames_.at(f.frame_index).rate;
    if (rate <= config_.quality.r0) continue;
    const double d = Distortion(rate, config_.quality);
    distortion.Add(d);
    quality.Add(QualityScore(d));
  }
  r.mean_distortion = distortion.mean();
  r.mean_quality = quality.mean();
  r.mean_frame_delay_ms = delay.mean();
  r.frames_captured = source_->frames_captured();
  r.frames_dropped_at_sender = source_->frames_dropped();
  r.frames_delivered = sink_.delivered().size();
  r.frames_abandoned = sink_.abandoned().size();
  r.mean_owd_ms = owd_ms_.mean();
  uint64_t sent = 0;
  uint64_t dropped = 0;
  for (const auto& c : conns_) {
    sent += c->stats().packets_sent;
    dropped += network_->DropsForFlow(c->config().flow_id);
  }
  r.loss_rate = sent ? static_cast<double>(dropped) / static_cast<double>(sent) : 0.0;
  r.path_switches = switches_;
  r.retransmissions = scheduler_.stats().retransmissions;
  r.key_age_evictions = scheduler_.stats().key_age_evictions;
  r.max_nonkey_retx_age = scheduler_.stats().max_nonkey_retx_age;
  return r;
}

void MultipathSession::WriteRates(std::ostream& out) const {
  out << "time_s,series,rate_bps\n";
  for (size_t i = 0; i < total_rx_.bins(); ++i) {
    for (size_t s = 0; s < subflow_rx_.size(); ++s) {
      out << i << ",s" << s << ',' << subflow_rx_[s].RateOfBin(i).bps() << '\n';
    }
    out << i << ",total," << total_rx_.RateOfBin(i).bps() << '\n';
  }
}

void MultipathSession::WriteSelections(std::ostream& out) const {
  out << "slot,time_s,scheme,subflow,path,switched,score\n";
  out << std::setprecision(10);
  for (const SlotRecord& r : slots_) {
    out << r.slot << ',' << r.at.seconds() << ',' << ToString(config_.scheme) << ','
        << r.subflow << ',' << r.path << ',' << (r.switched ? 1 : 0) << ',';
    if (r.score) out << *r.score;
    out << '\n';
  }
}

void MultipathSession::WriteFrames(std::ostream& out) const {
  out << "frame_index,capture_ts_ms,delivered_ts_ms,size,key,dropped_at_sender,abandoned\n";
  std::vector<const FrameSink::DeliveredFrame*> delivered(frames_.size(), nullptr);
  for (const auto& f : sink_.delivered()) delivered.at(f.frame_index) = &f;
  std::vector<bool> abandoned(frames_.size(), false);
  for (uint32_t idx : sink_.abandoned()) {
    if (idx < abandoned.size()) abandoned[idx] = true;
  }
  out << std::fixed << std::setprecision(3);
  for (size_t i = 0; i < frames_.size(); ++i) {
    const FrameRecord& f = frames_[i];
    out << i << ',' << f.capture_ts.ms() << ',';
    if (delivered[i]) out << delivered[i]->delivered_ts.ms();
    out << ',' << f.size << ',' << (f.key ? 1 : 0) << ',' << (f.dropped ? 1 : 0) << ','
        << (abandoned[i] ? 1 : 0) << '\n';
  }
}

void MultipathSession::WriteCcTrace(std::ostream& out) const {
  out << "connection," << BbrController::TraceHeader() << '\n';
  for (const auto& c : conns_) {
    for (const std::string& line : c->cc_trace()) out << c->config().route << ',' << line << '\n';
  }
}

}  // namespace mprtc
