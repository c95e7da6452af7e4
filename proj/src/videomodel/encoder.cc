#include "mprtc/videomodel/encoder.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mprtc {

VideoEncoder::VideoEncoder(EncoderConfig config, std::mt19937_64* rng)
    : config_(config),
      rng_(rng),
      target_(std::max(config.initial_rate, config.floor)),
      actual_bps_(static_cast<double>(target_.bps())),
      d_en_hat_(config.encode_delay) {
  if (config_.fps <= 0 || config_.key_interval <= 0)
    throw std::invalid_argument("fps and key interval must be positive");
  if (config_.key_multiplier < 1 || config_.key_multiplier > config_.key_interval)
    throw std::invalid_argument("key multiplier out of range");
}

void VideoEncoder::Advance(Timestamp now) {
  const TimeDelta dt = now - last_update_;
  if (dt <= TimeDelta::Zero()) return;
  const double k = 1.0 - std::exp(-dt.seconds() / config_.lag.seconds());
  actual_bps_ += (static_cast<double>(target_.bps()) - actual_bps_) * k;
  actual_bps_ = std::max(actual_bps_, static_cast<double>(config_.floor.bps()));
  last_update_ = now;
}

void VideoEncoder::SetTargetRate(DataRate target, Timestamp now) {
  Advance(now);
  target_ = std::max(target, config_.floor);
}

int64_t VideoEncoder::FrameSize(uint32_t frame_index) const {
  const double mean_bytes = actual_bps_ / (8.0 * config_.fps);
  const double n = config_.key_interval;
  // Non-key frames shrink so a whole group still averages the mean size.
  const double scale = IsKeyFrame(frame_index)
                           ? config_.key_multiplier
                           : (n - config_.key_multiplier) / (n - 1);
  return std::max<int64_t>(1, std::llround(mean_bytes * scale));
}

EncodedFrame VideoEncoder::Encode(const RawFrame& raw, Timestamp now) {
  Advance(now);
  EncodedFrame f;
  f.frame_index = raw.frame_index;
  f.capture_ts = raw.capture_ts;
  f.key_frame = IsKeyFrame(raw.frame_index);
  f.size = FrameSize(raw.frame_index);
  f.encode_done_ts = now;
  f.rate = actual_rate();
  return f;
}

TimeDelta VideoEncoder::SampleEncodeDelay() {
  std::uniform_int_distribution<int64_t> d(
      (config_.encode_delay - config_.encode_jitter).us(),
      (config_.encode_delay + config_.encode_jitter).us());
  return TimeDelta::Micros(d(*rng_));
}

TimeDelta VideoEncoder::OnEncodeDelay(TimeDelta sample) {
  const double v = (1 - config_.delay_alpha) * static_cast<double>(d_en_hat_.us()) +
                   config_.delay_alpha * static_cast<double>(sample.us());
  d_en_hat_ = TimeDelta::Micros(std::llround(v));
  return d_en_hat_;
}

bool ShouldDropFrame(TimeDelta queue_delay, TimeDelta encode_delay,
                     TimeDelta lambda_min) {
  if (lambda_min.IsInfinite()) return true;
  return queue_delay + encode_delay + lambda_min > kFrameDelayLimit;
}

VideoSource::VideoSource(EventLoop* loop, VideoEncoder* encoder, LatencyFn lambda_min,
                         FrameFn on_encoded, DropFn on_dropped)
    : loop_(loop),
      encoder_(encoder),
      lambda_min_(std::move(lambda_min)),
      on_encoded_(std::move(on_encoded)),
      on_dropped_(std::move(on_dropped)) {}

void VideoSource::Start(Timestamp first_capture, Timestamp stop) {
  running_ = true;
  first_capture_ = first_capture;
  stop_ = stop;
  if (first_capture < stop_) loop_->Schedule(first_capture, [this] { Capture(); });
}

void VideoSource::Capture() {
  if (!running_) return;
  RawFrame raw;
  raw.frame_index = next_index_++;
  raw.capture_ts = loop_->now();
  raw_queue_.push_back(raw);
  ++captured_;
  // Exact cadence: frame k is captured at first + k / fps seconds.
  const Timestamp next =
      first_capture_ + TimeDelta::Micros(static_cast<int64_t>(next_index_) * 1000000 / encoder_->fps());
  if (next < stop_) loop_->Schedule(next, [this] { Capture(); });
  MaybeEncodeNext();
}

void VideoSource::MaybeEncodeNext() {
  while (!busy_ && !raw_queue_.empty()) {
    const RawFrame raw = raw_queue_.front();
    raw_queue_.pop_front();
    const Timestamp now = loop_->now();
    if (ShouldDropFrame(now - raw.capture_ts, encoder_->smoothed_encode_delay(),
                        lambda_min_())) {
      ++dropped_;
      if (on_dropped_) on_dropped_(raw, now);
      continue;
    }
    busy_ = true;
    const TimeDelta d = encoder_->SampleEncodeDelay();
    loop_->ScheduleAfter(d, [this, raw, d] {
      busy_ = false;
      encoder_->OnEncodeDelay(d);
      const EncodedFrame f = encoder_->Encode(raw, loop_->now());
      ++encoded_;
      if (on_encoded_) on_encoded_(f);
      MaybeEncodeNext();
    });
  }
}

}  // namespace mprtc
