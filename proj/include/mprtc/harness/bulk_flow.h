#ifndef MPRTC_HARNESS_BULK_FLOW_H_
#define MPRTC_HARNESS_BULK_FLOW_H_

#include <memory>
#include <random>
#include <string>

#include "mprtc/harness/metrics.h"
#include "mprtc/harness/path_connection.h"

namespace mprtc {

struct BulkFlowConfig {
  uint32_t flow_id = 0;
  std::string route;
  CcVariant variant = CcVariant::kRtcBbr;
  Timestamp start = Timestamp::Zero();
  // Sending rate cap of the application.
  DataRate max_rate = DataRate::MegabitsPerSec(4);
  bool record_cc_trace = false;
};

// Greedy sender that always has a full-size segment ready, paced at no more
// than its cap. Lost segments are not retransmitted.
class BulkFlow {
 public:
  BulkFlow(EventLoop* loop, Network* network, BulkFlowConfig config,
           std::mt19937_64* rng);

  // Schedules activation at the configured start time.
  void Start();

  const BulkFlowConfig& config() const { return config_; }
  const PathConnection& connection() const { return *conn_; }
  const RateSeries& received() const { return received_; }
  // Packets carrying data.
  uint64_t data_packets_sent() const { return data_packets_sent_; }

 private:
  EventLoop* loop_;
  BulkFlowConfig config_;
  std::unique_ptr<PathConnection> conn_;
  StreamFrame next_;
  uint64_t offset_ = 0;
  uint64_t data_packets_sent_ = 0;
  RateSeries received_;
};

}  // namespace mprtc

#endif  // MPRTC_HARNESS_BULK_FLOW_H_
