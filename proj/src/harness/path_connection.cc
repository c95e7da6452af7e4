#include "mprtc/harness/path_connection.h"

#include <algorithm>
#include <utility>

#include "mprtc/transport/packetizer.h"

namespace mprtc {

PathConnection::PathConnection(EventLoop* loop, Network* network,
                               PathConnectionConfig config, std::mt19937_64* rng,
                               Callbacks callbacks)
    : loop_(loop),
      network_(network),
      config_(std::move(config)),
      cb_(std::move(callbacks)),
      cc_(config_.variant, rng),
      alive_(std::make_shared<bool>(true)) {
  if (!network_->HasRoute(config_.route) || !network_->HasRoute(config_.reverse_route))
    throw std::invalid_argument("unknown route for connection " + config_.route);
}

PathConnection::~PathConnection() {
  *alive_ = false;
  for (auto* ev : {&send_event_, &tick_event_, &loss_event_, &ack_event_}) {
    if (*ev) loop_->Cancel(**ev);
  }
}

void PathConnection::Activate() {
  if (active_) return;
  const Timestamp now = loop_->now();
  if (started_) cc_.Resume(now);
  started_ = true;
  active_ = true;
  if (!tick_event_) {
    tick_event_ = loop_->ScheduleAfter(kTickInterval, [this, alive = alive_] {
      if (*alive) OnTick();
    });
  }
  Wake();
}

void PathConnection::Pause() {
  if (!active_) return;
  active_ = false;
  cc_.Pause(loop_->now());
  if (send_event_) {
    loop_->Cancel(*send_event_);
    send_event_.reset();
  }
}

void PathConnection::Wake() {
  if (!active_) {
    MaybeSendStandaloneStopWaiting();
    return;
  }
  ScheduleSend(loop_->now());
}

void PathConnection::ScheduleSend(Timestamp at) {
  if (send_event_) {
    if (send_event_at_ <= at) return;
    loop_->Cancel(*send_event_);
  }
  send_event_at_ = at;
  send_event_ = loop_->Schedule(at, [this, alive = alive_] {
    if (!*alive) return;
    send_event_.reset();
    TrySend();
  });
}

std::optional<PacketNumber> PathConnection::PendingStopWaiting() {
  const Timestamp now = loop_->now();
  const PacketNumber lu = spm_.LeastUnacked(
      [&](SegmentId id) { return cb_.is_retained && cb_.is_retained(id, now); });
  if (lu > stop_waiting_sent_) return lu;
  return std::nullopt;
}

void PathConnection::TrySend() {
  if (!active_) return;
  const Timestamp now = loop_->now();
  const CcOutputs out = cc_.outputs();
  DataRate rate = out.pacing_rate;
  if (config_.max_pacing_rate > DataRate::Zero())
    rate = std::min(rate, config_.max_pacing_rate);
  const std::optional<Timestamp> next = pacer_.NextSendTime(now, rate);
  if (!next) return;  // Zero rate: the next ACK or tick wakes us.
  if (*next > now) {
    ScheduleSend(*next);
    return;
  }
  if (spm_.bytes_in_flight() >= out.cwnd) return;  // An ACK wakes us.

  Packet packet;
  packet.packet_number = spm_.next_packet_number();
  const std::optional<PacketNumber> sw = PendingStopWaiting();
  size_t budget = kMaxPacketSize - kPacketHeaderSize;
  if (sw) {
    packet.frames.emplace_back(StopWaitingFrame{*sw});
    budget -= kStopWaitingFrameSize;
  }
  std::vector<SegmentId> segments;
  SegmentId id = 0;
  const StreamFrame* segment = cb_.peek_segment ? cb_.peek_segment(&id) : nullptr;
  if (segment && kStreamFrameHeaderSize + segment->payload.size() <= budget) {
    packet.frames.emplace_back(*segment);
    segments.push_back(id);
    cb_.on_segment_sent(id, now);
  } else if (config_.probe_padding &&
             (cc_.mode() == CcMode::kStartUp || cc_.pacing_gain() > 1.0)) {
    packet.padding = budget;
    ++stats_.padding_packets;
  } else {
    spm_.OnAppLimited();
    if (!sw) return;
    ++stats_.stop_waiting_only_packets;
  }
  if (sw) stop_waiting_sent_ = *sw;
  SendPacket(std::move(packet), std::move(segments));
  ScheduleSend(pacer_.NextSendTime(now, rate).value_or(now));
}

void PathConnection::SendPacket(Packet packet, std::vector<SegmentId> segments) {
  const Timestamp now = loop_->now();
  SimPacket sim;
  sim.data = EncodePacket(packet);
  sim.flow_id = config_.flow_id;
  sim.sent_time = now;
  const int64_t size = sim.size();
  if (!segments.empty()) last_data_pn_ = packet.packet_number;
  spm_.OnPacketSent(now, size, std::move(segments));
  pacer_.OnPacketSent(now, size);
  ++stats_.packets_sent;
  stats_.bytes_sent += size;
  network_->Send(config_.route, std::move(sim), [this, alive = alive_](SimPacket p) {
    if (*alive) OnDataPacket(p);
  });
  ArmLossTimer();
}

void PathConnection::MaybeSendStandaloneStopWaiting() {
  // An idle connection has no data packet to piggyback on, so the update
  // travels alone, outside pacing and the congestion window.
  // Capped just past the last packet with data so that the standalone
  // packet itself never calls for another one.
  if (!started_ || !last_data_pn_) return;
  std::optional<PacketNumber> sw = PendingStopWaiting();
  if (!sw) return;
  sw = std::min(*sw, *last_data_pn_ + 1);
  if (*sw <= stop_waiting_sent_) return;
  Packet packet;
  packet.packet_number = spm_.next_packet_number();
  packet.frames.emplace_back(StopWaitingFrame{*sw});
  stop_waiting_sent_ = *sw;
  ++stats_.stop_waiting_only_packets;
  SendPacket(std::move(packet), {});
}

void PathConnection::OnTick() {
  tick_event_.reset();
  if (!active_) return;
  const Timestamp now = loop_->now();
  cc_.OnTick(now, spm_.bytes_in_flight());
  if (config_.record_cc_trace)
    cc_trace_.push_back(cc_.TraceLine(now, spm_.bytes_in_flight()));
  tick_event_ = loop_->ScheduleAfter(kTickInterval, [this, alive = alive_] {
    if (*alive) OnTick();
  });
  Wake();
}

void PathConnection::ArmLossTimer() {
  const std::optional<Timestamp> at = spm_.LossTime();
  if (!at) return;
  const Timestamp when = std::max(*at, loop_->now());
  if (loss_event_) {
    if (loss_event_at_ <= when) return;
    loop_->Cancel(*loss_event_);
  }
  loss_event_at_ = when;
  loss_event_ = loop_->Schedule(when, [this, alive = alive_] {
    if (!*alive) return;
    loss_event_.reset();
    OnLossTimer();
  });
}

void PathConnection::OnLossTimer() {
  HandleLosses(spm_.OnLossTimer(loop_->now()));
  ArmLossTimer();
  Wake();
}

void PathConnection::HandleLosses(const std::vector<SentPacketRecord>& lost) {
  if (lost.empty()) return;
  stats_.losses_detected += lost.size();
  cc_.OnPacketLost();
  const Timestamp now = loop_->now();
  for (const SentPacketRecord& r : lost) {
    for (SegmentId id : r.segments) {
      if (cb_.on_segment_lost) cb_.on_segment_lost(id, now);
    }
  }
}

void PathConnection::OnAckPacket(const SimPacket& sim) {
  const Timestamp now = loop_->now();
  const Packet packet = DecodePacket(sim.data);
  for (const Frame& f : packet.frames) {
    const auto* ack = std::get_if<AckFrame>(&f);
    if (!ack) continue;
    AckResult result = spm_.OnAck(*ack, now);
    for (const SentPacketRecord& r : result.acked) {
      for (SegmentId id : r.segments) {
        if (cb_.on_segment_acked) cb_.on_segment_acked(id);
      }
    }
    // Losses first so the samples of this ACK carry them.
    HandleLosses(result.lost);
    for (const DeliveryRateSample& s : result.samples) {
      cc_.OnSample(s, now);
      if (active_ && cb_.on_sample) cb_.on_sample(s);
    }
  }
  ArmLossTimer();
  Wake();
}

void PathConnection::OnDataPacket(const SimPacket& sim) {
  const Timestamp now = loop_->now();
  const Packet packet = DecodePacket(sim.data);
  if (!rpm_.OnPacketReceived(packet.packet_number, now)) {
    ++stats_.duplicate_packets;
    return;
  }
  ++stats_.packets_received;
  std::vector<uint32_t> frames;
  for (const Frame& f : packet.frames) {
    if (const auto* s = std::get_if<StreamFrame>(&f)) {
      stats_.payload_bytes_received += static_cast<int64_t>(s->payload.size());
      stats_.owd_sum_ms += (now - sim.sent_time).ms();
      ++stats_.owd_count;
      frames.push_back(s->frame_index);
      if (cb_.on_stream_frame) cb_.on_stream_frame(*s, now, sim.sent_time);
    }
  }
  if (!frames.empty()) received_frames_[packet.packet_number] = std::move(frames);
  for (const Frame& f : packet.frames) {
    const auto* sw = std::get_if<StopWaitingFrame>(&f);
    if (!sw) continue;
    const std::vector<AckRange> gaps = rpm_.OnStopWaiting(sw->least_unacked);
    std::vector<uint32_t> neighbours;
    for (const AckRange& g : gaps) {
      for (PacketNumber pn : {g.start - 1, g.end + 1}) {
        if (g.start == 0 && pn == g.start - 1) continue;
        auto it = received_frames_.find(pn);
        if (it != received_frames_.end())
          neighbours.insert(neighbours.end(), it->second.begin(), it->second.end());
      }
    }
    if (!neighbours.empty() && cb_.on_gap_frames) cb_.on_gap_frames(neighbours);
    const PacketNumber keep_from = rpm_.stop_waiting() > 0 ? rpm_.stop_waiting() - 1 : 0;
    received_frames_.erase(received_frames_.begin(),
                           received_frames_.lower_bound(keep_from));
  }
  MaybeSendAck();
}

void PathConnection::MaybeSendAck() {
  if (rpm_.ShouldAckNow()) {
    SendAck();
    return;
  }
  if (ack_event_ || !rpm_.HasUnacked()) return;
  const Timestamp deadline = std::max(*rpm_.AckDeadline(), loop_->now());
  ack_event_ = loop_->Schedule(deadline, [this, alive = alive_] {
    if (!*alive) return;
    ack_event_.reset();
    if (rpm_.HasUnacked()) SendAck();
  });
}

void PathConnection::SendAck() {
  if (ack_event_) {
    loop_->Cancel(*ack_event_);
    ack_event_.reset();
  }
  const Timestamp now = loop_->now();
  Packet packet;
  packet.packet_number = next_ack_pn_++;
  packet.frames.emplace_back(rpm_.BuildAck(now));
  SimPacket sim;
  sim.data = EncodePacket(packet);
  sim.flow_id = config_.flow_id | kAckFlowBit;
  sim.sent_time = now;
  ++stats_.acks_sent;
  network_->Send(config_.reverse_route, std::move(sim),
                 [this, alive = alive_](SimPacket p) {
                   if (*alive) OnAckPacket(p);
                 });
}

}  // namespace mprtc
