#ifndef MPRTC_HARNESS_MULTIPATH_SESSION_H_
#define MPRTC_HARNESS_MULTIPATH_SESSION_H_

#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "mprtc/bandit/path_manager.h"
#include "mprtc/harness/metrics.h"
#include "mprtc/harness/path_connection.h"
#include "mprtc/scheduler/multipath_scheduler.h"
#include "mprtc/videomodel/encoder.h"
#include "mprtc/videomodel/frame_sink.h"
#include "mprtc/videomodel/quality.h"
#include "mprtc/videomodel/rate_controller.h"

namespace mprtc {

enum class PathScheme { kUcb, kDefault, kOracle };

// Parses "ucb", "default", "oracle"; throws std::invalid_argument otherwise.
PathScheme ParsePathScheme(const std::string& name);
std::string ToString(PathScheme scheme);

struct MultipathConfig {
  PathScheme scheme = PathScheme::kUcb;
  CcVariant variant = CcVariant::kRtcBbr;
  TimeDelta duration = TimeDelta::Seconds(400);
  int subflows = 2;
  int paths_per_subflow = 2;
  TimeDelta slot = TimeDelta::Seconds(1);
  EncoderConfig encoder;
  QualityModelParams quality;
  bool log_decisions = false;
  bool record_cc_trace = false;
};

struct MultipathResult {
  // Unique media payload delivered to the receiver, over the session.
  DataRate throughput;
  // Mean distortion and quality score of delivered frames, each at the rate
  // it was encoded for; frames encoded at or below R0 are left out.
  double mean_distortion = 0;
  double mean_quality = 0;
  uint64_t frames_captured = 0;
  uint64_t frames_dropped_at_sender = 0;
  uint64_t frames_delivered = 0;
  uint64_t frames_abandoned = 0;
  double mean_frame_delay_ms = 0;
  double mean_owd_ms = 0;
  double loss_rate = 0;
  uint64_t path_switches = 0;
  uint64_t retransmissions = 0;
  uint64_t key_age_evictions = 0;
  TimeDelta max_nonkey_retx_age;
};

// One video call over subflows x candidate paths. Every slot each subflow is
// bound to one candidate (by UCB, pinned to the direct path, or by ground
// truth); the other candidates' connections are paused. Every 50 ms the
// encoder target follows the active controllers' estimates.
class MultipathSession {
 public:
  static constexpr TimeDelta kTick = TimeDelta::Millis(50);

  // `network` must provide routes PathRouteName(s, p) and their reverses.
  MultipathSession(EventLoop* loop, Network* network, MultipathConfig config,
                   std::mt19937_64* rng);
  MultipathSession(const MultipathSession&) = delete;
  MultipathSession& operator=(const MultipathSession&) = delete;

  void Start();
  // Stops capture and abandons frames still incomplete; call at the end.
  void Finish();

  MultipathResult Result() const;
  int active_path(int subflow) const { return active_.at(subflow); }
  const MultipathScheduler& scheduler() const { return scheduler_; }
  const PathManager& path_manager() const { return path_manager_; }
  const FrameSink& sink() const { return sink_; }
  const PathConnection& connection(int subflow, int path) const {
    return *conns_.at(Index(subflow, path));
  }

  // "time_s,series,rate_bps": received rate per subflow and in total.
  void WriteRates(std::ostream& out) const;
  // "slot,time_s,scheme,subflow,path,switched,score"
  void WriteSelections(std::ostream& out) const;
  // "frame_index,capture_ts_ms,delivered_ts_ms,size,key,dropped_at_sender,abandoned"
  void WriteFrames(std::ostream& out) const;
  // Controller trace of every connection, prefixed with "connection,".
  void WriteCcTrace(std::ostream& out) const;

 private:
  struct FrameRecord {
    Timestamp capture_ts;
    int64_t size = 0;
    bool key = false;
    bool dropped = false;
    bool encoded = false;
    DataRate rate;
  };
  struct SlotRecord {
    uint64_t slot;
    Timestamp at;
    int subflow;
    int path;
    bool switched;
    std::optional<double> score;
  };

  size_t Index(int subflow, int path) const {
    return static_cast<size_t>(subflow * config_.paths_per_subflow + path);
  }
  int PathId(int subflow, int path) const { return static_cast<int>(Index(subflow, path)); }
  PathConnection& Active(int subflow) { return *conns_[Index(subflow, active_[subflow])]; }

  void OnSlot();
  void OnTick();
  void Bind(int subflow, int path);
  void OnEncoded(const EncodedFrame& frame);
  void OnStream(int subflow, const StreamFrame& s, Timestamp now, Timestamp sent);
  void OnGapFrames(const std::vector<uint32_t>& frames);

  EventLoop* loop_;
  Network* network_;
  MultipathConfig config_;
  Timestamp end_;
  std::vector<std::unique_ptr<PathConnection>> conns_;
  std::vector<int> active_;
  MultipathScheduler scheduler_;
  PathManager path_manager_;
  RateController rate_controller_;
  VideoEncoder encoder_;
  std::unique_ptr<VideoSource> source_;
  FrameSink sink_;
  uint64_t offset_ = 0;
  uint64_t slot_ = 0;
  uint64_t switches_ = 0;

  std::vector<FrameRecord> frames_;
  std::vector<SlotRecord> slots_;
  std::vector<RateSeries> subflow_rx_;
  RateSeries total_rx_;
  MeanAccumulator owd_ms_;
};

}  // namespace mprtc

#endif  // MPRTC_HARNESS_MULTIPATH_SESSION_H_
