#include "mprtc/harness/bulk_flow.h"

#include <algorithm>

#include "mprtc/simnet/topology.h"
#include "mprtc/transport/packetizer.h"

namespace mprtc {

BulkFlow::BulkFlow(EventLoop* loop, Network* network, BulkFlowConfig config,
                   std::mt19937_64* rng)
    : loop_(loop), config_(std::move(config)) {
  next_.payload.assign(kMaxStreamPayload, 0);
  PathConnectionConfig cc;
  cc.flow_id = config_.flow_id;
  cc.route = config_.route;
  cc.reverse_route = ReverseRouteName(config_.route);
  cc.variant = config_.variant;
  cc.max_pacing_rate = config_.max_rate;
  cc.record_cc_trace = config_.record_cc_trace;

  PathConnection::Callbacks cb;
  cb.peek_segment = [this](SegmentId* id) {
    *id = next_.frame_index;
    next_.stream_offset = offset_;
    next_.capture_ts = loop_->now();
    return &next_;
  };
  cb.on_segment_sent = [this](SegmentId, Timestamp) {
    offset_ += next_.payload.size();
    ++next_.frame_index;
    ++data_packets_sent_;
  };
  cb.is_retained = [](SegmentId, Timestamp) { return false; };
  cb.on_stream_frame = [this](const StreamFrame& s, Timestamp now, Timestamp) {
    received_.Add(now, static_cast<int64_t>(s.payload.size()));
  };
  conn_ = std::make_unique<PathConnection>(loop, network, std::move(cc), rng,
                                           std::move(cb));
}

void BulkFlow::Start() {
  loop_->Schedule(std::max(config_.start, loop_->now()), [this] { conn_->Activate(); });
}

}  // namespace mprtc
