#include "mprtc/congestion/bbr_controller.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace mprtc {

CcVariant ParseCcVariant(const std::string& name) {
  if (name == "bbr") return CcVariant::kBbr;
  if (name == "rtc-bbr") return CcVariant::kRtcBbr;
  throw std::invalid_argument("unknown congestion controller '" + name + "'");
}

std::string ToString(CcVariant variant) {
  return variant == CcVariant::kBbr ? "bbr" : "rtc-bbr";
}

std::string ToString(CcMode mode) {
  switch (mode) {
    case CcMode::kStartUp:
      return "StartUp";
    case CcMode::kDrain:
      return "Drain";
    case CcMode::kProbeBw:
      return "ProbeBW";
    case CcMode::kProbeRtt:
      return "ProbeRTT";
  }
  return "?";
}

BbrController::BbrController(CcVariant variant, std::mt19937_64* rng)
    : variant_(variant), rng_(rng) {
  pacing_rate_ = DataRate::FromBytesOver(kInitialCwnd, kInitialRtt) * kHighGain;
}

int64_t BbrController::bdp() const {
  const auto rtt = rtt_min();
  if (!rtt) return 0;
  return bw_es().BytesOver(*rtt);
}

double BbrController::pacing_gain() const {
  switch (mode_) {
    case CcMode::kStartUp:
      return kHighGain;
    case CcMode::kDrain:
      return kDrainGain;
    case CcMode::kProbeRtt:
      return 1.0;
    case CcMode::kProbeBw:
      return variant_ == CcVariant::kRtcBbr ? rtc_gain_ : kStockGains[cycle_index_];
  }
  return 1.0;
}

void BbrController::OnSample(const DeliveryRateSample& sample, Timestamp now) {
  if (paused_) return;
  bool round_start = false;
  if (sample.prior_delivered >= next_round_delivered_) {
    next_round_delivered_ = sample.delivered;
    ++round_count_;
    round_start = true;
  }
  // App-limited samples only ever raise the estimate.
  if (!sample.is_app_limited || sample.bandwidth > bw_filter_.best())
    bw_filter_.Update(sample.bandwidth, round_count_);
  const bool min_rtt_stale = min_rtt_filter_.Update(sample.rtt, now);
  has_loss_ = has_loss_ || sample.has_loss;

  if (mode_ == CcMode::kStartUp) {
    CheckFullPipe(sample, round_start);
    if (full_bw_reached_) mode_ = CcMode::kDrain;
  }
  if (mode_ == CcMode::kDrain && sample.inflight <= bdp()) EnterProbeBw(now);
  if (mode_ == CcMode::kProbeBw) {
    if (variant_ == CcVariant::kRtcBbr) {
      UpdateGainCyclePhase(now, sample.inflight, has_loss_);
    } else {
      UpdateStockCycle(now, sample.inflight);
    }
    has_loss_ = false;
  }
  if (min_rtt_stale && mode_ != CcMode::kProbeRtt) EnterProbeRtt(now);
  UpdateTimeDriven(now, sample.inflight);
  UpdateOutputs();
}

void BbrController::OnTick(Timestamp now, int64_t inflight) {
  if (paused_) return;
  if (mode_ == CcMode::kDrain && inflight <= bdp()) EnterProbeBw(now);
  UpdateTimeDriven(now, inflight);
  UpdateOutputs();
}

void BbrController::CheckFullPipe(const DeliveryRateSample& sample,
                                  bool round_start) {
  if (full_bw_reached_ || !round_start || sample.is_app_limited) return;
  if (bw_es() >= full_bw_ * kStartupGrowthTarget) {
    full_bw_ = bw_es();
    full_bw_count_ = 0;
    return;
  }
  if (++full_bw_count_ >= kStartupFullBwRounds) full_bw_reached_ = true;
}

void BbrController::EnterProbeBw(Timestamp now) {
  mode_ = CcMode::kProbeBw;
  cycle_mstamp_ = now;
  has_loss_ = false;
  if (variant_ == CcVariant::kRtcBbr) {
    // Start in cruise; the first cycle restart probes up.
    cycle_len_ = kGainCycleLen - static_cast<int>((*rng_)() % kCycleRand);
    rtc_gain_ = 1.0;
  } else {
    // Any phase but the probe-down one.
    const int draw = static_cast<int>((*rng_)() % kCycleRand);
    cycle_index_ = draw == 0 ? 0 : draw + 1;
  }
}

void BbrController::EnterProbeRtt(Timestamp now) {
  (void)now;
  mode_ = CcMode::kProbeRtt;
  probe_rtt_done_.reset();
  ++probe_rtt_count_;
}

void BbrController::UpdateTimeDriven(Timestamp now, int64_t inflight) {
  if (mode_ != CcMode::kProbeRtt) return;
  if (!probe_rtt_done_ && inflight <= kMinCwnd) {
    const TimeDelta rtt = rtt_min().value_or(kInitialRtt);
    probe_rtt_done_ = now + std::max(kProbeRttDuration, rtt);
    return;
  }
  if (probe_rtt_done_ && now >= *probe_rtt_done_) {
    min_rtt_filter_.Refresh(now);
    probe_rtt_done_.reset();
    if (full_bw_reached_) {
      EnterProbeBw(now);
    } else {
      mode_ = CcMode::kStartUp;
    }
  }
}

void BbrController::UpdateGainCyclePhase(Timestamp now, int64_t inflight,
                                         bool has_loss) {
  const TimeDelta rtt = rtt_min().value_or(kInitialRtt);
  const TimeDelta elapsed = now - cycle_mstamp_;
  if (elapsed > rtt * static_cast<int64_t>(cycle_len_)) {
    cycle_mstamp_ = now;
    cycle_len_ = kGainCycleLen - static_cast<int>((*rng_)() % kCycleRand);
    rtc_gain_ = kRtcProbeUpGain;
    return;
  }
  if (rtc_gain_ == 1.0) return;
  const int64_t bdp_bytes = bdp();
  if (rtc_gain_ < 1.0 && inflight <= bdp_bytes) rtc_gain_ = 1.0;
  if (elapsed > rtt && (inflight > bdp_bytes * kRtcProbeUpGain || has_loss))
    rtc_gain_ = kRtcProbeDownGain;
}

void BbrController::UpdateStockCycle(Timestamp now, int64_t inflight) {
  const TimeDelta rtt = rtt_min().value_or(kInitialRtt);
  const bool full_length = now - cycle_mstamp_ > rtt;
  const bool advance = kStockGains[cycle_index_] < 1.0
                           ? full_length || inflight <= bdp()
                           : full_length;
  if (!advance) return;
  cycle_index_ = (cycle_index_ + 1) % kGainCycleLen;
  cycle_mstamp_ = now;
}

void BbrController::UpdateOutputs() {
  const DataRate bw = bw_es();
  if (!bw.IsZero()) {
    const DataRate rate = bw * pacing_gain();
    if (mode_ == CcMode::kStartUp && !full_bw_reached_) {
      pacing_rate_ = std::max(pacing_rate_, rate);
    } else {
      pacing_rate_ = rate;
    }
  }
  const int64_t bdp_bytes = bdp();
  switch (mode_) {
    case CcMode::kStartUp:
      cwnd_ = std::max(cwnd_, static_cast<int64_t>(bdp_bytes * kHighGain));
      break;
    case CcMode::kDrain:
      cwnd_ = static_cast<int64_t>(bdp_bytes * kHighGain);
      break;
    case CcMode::kProbeBw:
      cwnd_ = static_cast<int64_t>(bdp_bytes * kProbeBwCwndGain);
      break;
    case CcMode::kProbeRtt:
      cwnd_ = kMinCwnd;
      break;
  }
  cwnd_ = std::max(cwnd_, kMinCwnd);
}

CcOutputs BbrController::outputs() const {
  return CcOutputs{pacing_rate_, cwnd_, bw_es(), rtt_min().value_or(TimeDelta::Zero())};
}

void BbrController::Pause(Timestamp now) {
  if (paused_) return;
  paused_ = true;
  paused_at_ = now;
}

void BbrController::Resume(Timestamp now) {
  if (!paused_) return;
  paused_ = false;
  const TimeDelta gap = now - paused_at_;
  min_rtt_filter_.ShiftTime(gap);
  cycle_mstamp_ += gap;
  if (probe_rtt_done_) *probe_rtt_done_ += gap;
}

std::string BbrController::TraceHeader() {
  return "time_s,mode,gain,bw_es_bps,rtt_min_us,inflight,cwnd,pacing_bps";
}

std::string BbrController::TraceLine(Timestamp now, int64_t inflight) const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.6f,%s,%.4f,%lld,%lld,%lld,%lld,%lld",
                now.seconds(), ToString(mode_).c_str(), pacing_gain(),
                static_cast<long long>(bw_es().bps()),
                static_cast<long long>(rtt_min().value_or(TimeDelta::Zero()).us()),
                static_cast<long long>(inflight), static_cast<long long>(cwnd_),
                static_cast<long long>(pacing_rate_.bps()));
  return buf;
}

void BbrController::ForceProbeBw(Timestamp now, double gain, int cycle_len) {
  mode_ = CcMode::kProbeBw;
  full_bw_reached_ = true;
  cycle_mstamp_ = now;
  rtc_gain_ = gain;
  cycle_len_ = cycle_len;
  UpdateOutputs();
}

void BbrController::ForceStockPhase(Timestamp now, int index) {
  mode_ = CcMode::kProbeBw;
  full_bw_reached_ = true;
  cycle_mstamp_ = now;
  cycle_index_ = index;
  UpdateOutputs();
}

}  // namespace mprtc
