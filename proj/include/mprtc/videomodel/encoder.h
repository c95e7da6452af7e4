#ifndef MPRTC_VIDEOMODEL_ENCODER_H_
#define MPRTC_VIDEOMODEL_ENCODER_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <random>

#include "mprtc/simnet/event_loop.h"
#include "mprtc/simnet/units.h"

namespace mprtc {

struct RawFrame {
  uint32_t frame_index = 0;
  Timestamp capture_ts;
};

struct EncodedFrame {
  uint32_t frame_index = 0;
  Timestamp capture_ts;
  int64_t size = 0;
  bool key_frame = false;
  Timestamp encode_done_ts;
  // Encoder output rate the frame was sized for.
  DataRate rate;
};

struct EncoderConfig {
  int fps = 30;
  // Frames per group of pictures; frame 0 of each group is a key frame.
  int key_interval = 60;
  // Key frame size relative to the mean frame size.
  double key_multiplier = 4.0;
  // Time constant of the output rate's approach to the target.
  TimeDelta lag = TimeDelta::Seconds(1);
  DataRate floor = DataRate::KilobitsPerSec(50);
  DataRate initial_rate = DataRate::KilobitsPerSec(50);
  TimeDelta encode_delay = TimeDelta::Millis(8);
  TimeDelta encode_jitter = TimeDelta::Millis(2);
  double delay_alpha = 0.9;
};

// Synthetic encoder. The output rate follows the target through a
// first-order lag; frame sizes spread that rate over the frame cadence with
// periodic larger key frames.
class VideoEncoder {
 public:
  VideoEncoder(EncoderConfig config, std::mt19937_64* rng);

  // Advances the lag model to `now` under the old target, then retargets.
  void SetTargetRate(DataRate target, Timestamp now);
  // Sizes the frame using the rate reached at `now`.
  EncodedFrame Encode(const RawFrame& raw, Timestamp now);
  // Draws an encode duration: uniform within encode_delay +- encode_jitter.
  TimeDelta SampleEncodeDelay();
  // d_en_hat = (1 - alpha) * d_en_hat + alpha * sample.
  TimeDelta OnEncodeDelay(TimeDelta sample);

  DataRate actual_rate() const { return DataRate::BitsPerSec(static_cast<int64_t>(actual_bps_)); }
  DataRate target_rate() const { return target_; }
  TimeDelta smoothed_encode_delay() const { return d_en_hat_; }
  void set_smoothed_encode_delay(TimeDelta d) { d_en_hat_ = d; }
  int fps() const { return config_.fps; }
  bool IsKeyFrame(uint32_t frame_index) const {
    return frame_index % static_cast<uint32_t>(config_.key_interval) == 0;
  }
  int64_t FrameSize(uint32_t frame_index) const;

 private:
  void Advance(Timestamp now);

  EncoderConfig config_;
  std::mt19937_64* rng_;
  DataRate target_;
  double actual_bps_;
  Timestamp last_update_;
  TimeDelta d_en_hat_;
};

// Drop a frame at dequeue when d_q + d_en_hat + lambda_min exceeds the limit.
inline constexpr TimeDelta kFrameDelayLimit = TimeDelta::Millis(400);
bool ShouldDropFrame(TimeDelta queue_delay, TimeDelta encode_delay,
                     TimeDelta lambda_min);

// Capture -> raw queue -> encoder pipeline. Frames are captured at the
// configured cadence and encoded one at a time; each frame is checked
// against the delay limit when it leaves the raw queue.
class VideoSource {
 public:
  using LatencyFn = std::function<TimeDelta()>;
  using FrameFn = std::function<void(const EncodedFrame&)>;
  using DropFn = std::function<void(const RawFrame&, Timestamp)>;

  VideoSource(EventLoop* loop, VideoEncoder* encoder, LatencyFn lambda_min,
              FrameFn on_encoded, DropFn on_dropped);

  // Captures run on [first_capture, stop).
  void Start(Timestamp first_capture, Timestamp stop = Timestamp::PlusInfinity());
  void Stop() { running_ = false; }

  uint64_t frames_captured() const { return captured_; }
  uint64_t frames_dropped() const { return dropped_; }
  uint64_t frames_encoded() const { return encoded_; }

 private:
  void Capture();
  void MaybeEncodeNext();

  EventLoop* loop_;
  VideoEncoder* encoder_;
  LatencyFn lambda_min_;
  FrameFn on_encoded_;
  DropFn on_dropped_;
  Timestamp first_capture_;
  Timestamp stop_ = Timestamp::PlusInfinity();
  bool running_ = false;
  bool busy_ = false;
  uint32_t next_index_ = 0;
  std::deque<RawFrame> raw_queue_;
  uint64_t captured_ = 0;
  uint64_t dropped_ = 0;
  uint64_t encoded_ = 0;
};

}  // namespace mprtc

#endif  // MPRTC_VIDEOMODEL_ENCODER_H_
