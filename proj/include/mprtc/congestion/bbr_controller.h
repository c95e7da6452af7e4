#ifndef MPRTC_CONGESTION_BBR_CONTROLLER_H_
#define MPRTC_CONGESTION_BBR_CONTROLLER_H_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "mprtc/congestion/windowed_filter.h"
#include "mprtc/simnet/units.h"
#include "mprtc/transport/packetizer.h"
#include "mprtc/transport/sent_packet_manager.h"

namespace mprtc {

enum class CcVariant { kBbr, kRtcBbr };
enum class CcMode { kStartUp, kDrain, kProbeBw, kProbeRtt };

// Parses "bbr" and "rtc-bbr"; throws std::invalid_argument otherwise.
CcVariant ParseCcVariant(const std::string& name);
std::string ToString(CcVariant variant);
std::string ToString(CcMode mode);

struct CcOutputs {
  DataRate pacing_rate;
  int64_t cwnd = 0;
  DataRate bw_es;
  TimeDelta rtt_min;
};

// BBR-style rate-based congestion controller. The stock variant cycles the
// pacing gain through [1.25, 0.75, 1 x6], one phase per min RTT. The RTC
// variant probes with 1.1/0.85, randomizes the cycle length over 2..8 min
// RTTs, leaves the probe-up phase early on loss or excess inflight and holds
// probe-down only until inflight has drained to one BDP.
class BbrController {
 public:
  static constexpr double kHighGain = 2.885;
  static constexpr double kDrainGain = 1.0 / kHighGain;
  static constexpr double kRtcProbeUpGain = 1.1;
  static constexpr double kRtcProbeDownGain = 0.85;
  static constexpr int kGainCycleLen = 8;
  static constexpr int kCycleRand = 7;
  static constexpr std::array<double, 8> kStockGains = {1.25, 0.75, 1, 1,
                                                        1,    1,    1, 1};
  static constexpr uint64_t kBandwidthWindowRounds = 10;
  static constexpr TimeDelta kMinRttWindow = TimeDelta::Seconds(10);
  static constexpr TimeDelta kProbeRttDuration = TimeDelta::Millis(200);
  static constexpr double kStartupGrowthTarget = 1.25;
  static constexpr int kStartupFullBwRounds = 3;
  static constexpr int64_t kMss = kMaxPacketSize;
  static constexpr int64_t kInitialCwnd = 10 * kMss;
  static constexpr int64_t kMinCwnd = 4 * kMss;
  static constexpr double kProbeBwCwndGain = 2.0;
  // RTT assumed for the initial pacing rate, before any sample.
  static constexpr TimeDelta kInitialRtt = TimeDelta::Millis(100);

  // `rng` supplies the randomized cycle draws and must outlive the controller.
  BbrController(CcVariant variant, std::mt19937_64* rng);

  // Feeds one delivery-rate sample; `sample.inflight` is the current inflight.
  void OnSample(const DeliveryRateSample& sample, Timestamp now);
  void OnPacketLost() { has_loss_ = true; }
  // Time-driven transitions (ProbeRTT dwell, Drain exit) between ACKs.
  void OnTick(Timestamp now, int64_t inflight);

  // A paused controller ignores samples and its clocks stand still: on resume
  // every stored timestamp moves forward by the pause length.
  void Pause(Timestamp now);
  void Resume(Timestamp now);
  bool paused() const { return paused_; }

  // The RTC-BBR probe-bandwidth gain update, exposed for direct testing.
  void UpdateGainCyclePhase(Timestamp now, int64_t inflight, bool has_loss);

  CcOutputs outputs() const;
  DataRate bw_es() const { return bw_filter_.best(); }
  std::optional<TimeDelta> rtt_min() const { return min_rtt_filter_.min_rtt(); }
  int64_t bdp() const;
  CcMode mode() const { return mode_; }
  CcVariant variant() const { return variant_; }
  double pacing_gain() const;
  int cycle_len() const { return cycle_len_; }
  int cycle_index() const { return cycle_index_; }
  Timestamp cycle_stamp() const { return cycle_mstamp_; }
  bool full_bw_reached() const { return full_bw_reached_; }
  uint64_t round_count() const { return round_count_; }
  uint64_t probe_rtt_count() const { return probe_rtt_count_; }

  // "time_s,mode,gain,bw_es_bps,rtt_min_us,inflight,cwnd,pacing_bps"
  static std::string TraceHeader();
  std::string TraceLine(Timestamp now, int64_t inflight) const;

  // Test hooks to place the controller in ProbeBW with a given state.
  void ForceProbeBw(Timestamp now, double gain, int cycle_len);
  void ForceStockPhase(Timestamp now, int index);

 private:
  void CheckFullPipe(const DeliveryRateSample& sample, bool round_start);
  void EnterProbeBw(Timestamp now);
  void EnterProbeRtt(Timestamp now);
  void UpdateStockCycle(Timestamp now, int64_t inflight);
  void UpdateTimeDriven(Timestamp now, int64_t inflight);
  void UpdateOutputs();

  CcVariant variant_;
  std::mt19937_64* rng_;
  CcMode mode_ = CcMode::kStartUp;

  MaxBandwidthFilter bw_filter_{kBandwidthWindowRounds};
  MinRttFilter min_rtt_filter_{kMinRttWindow};
  uint64_t round_count_ = 0;
  int64_t next_round_delivered_ = 0;

  bool full_bw_reached_ = false;
  DataRate full_bw_;
  int full_bw_count_ = 0;

  // ProbeBW bookkeeping.
  Timestamp cycle_mstamp_;
  int cycle_len_ = kGainCycleLen;
  double rtc_gain_ = 1.0;
  int cycle_index_ = 0;
  bool has_loss_ = false;

  std::optional<Timestamp> probe_rtt_done_;
  uint64_t probe_rtt_count_ = 0;

  bool paused_ = false;
  Timestamp paused_at_;

  DataRate pacing_rate_;
  int64_t cwnd_ = kInitialCwnd;
};

}  // namespace mprtc

#endif  // MPRTC_CONGESTION_BBR_CONTROLLER_H_
