#include "mprtc/videomodel/encoder.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "mprtc/videomodel/rate_controller.h"

namespace mprtc {
namespace {

EncoderConfig AtRate(DataRate r) {
  EncoderConfig c;
  c.initial_rate = r;
  return c;
}

TEST(VideoEncoderTest, SteadyStateFrameSizes) {
  std::mt19937_64 rng(1);
  VideoEncoder enc(AtRate(DataRate::MegabitsPerSec(3)), &rng);
  // 3 Mbps / (8 x 30) = 12 500 bytes per frame on average.
  EXPECT_EQ(enc.FrameSize(0), 50000);
  EXPECT_EQ(enc.FrameSize(1), std::llround(12500.0 * 56 / 59));
  int64_t group = 0;
  for (uint32_t i = 0; i < 60; ++i) group += enc.FrameSize(i);
  EXPECT_NEAR(static_cast<double>(group), 60 * 12500.0, 60);
  EXPECT_TRUE(enc.IsKeyFrame(120));
  EXPECT_FALSE(enc.IsKeyFrame(59));
}

TEST(VideoEncoderTest, OutputLagsTheTarget) {
  std::mt19937_64 rng(1);
  VideoEncoder enc(AtRate(DataRate::MegabitsPerSec(3)), &rng);
  enc.SetTargetRate(DataRate::MegabitsPerSec(1), Timestamp::Zero());
  enc.SetTargetRate(DataRate::MegabitsPerSec(1), Timestamp::Seconds(1));
  // One time constant: 1 + 2 e^-1.
  EXPECT_NEAR(enc.actual_rate().mbps(), 1 + 2 * std::exp(-1.0), 1e-3);
  // Three time constants: within 5% of the 2 Mbps step.
  const EncodedFrame f = enc.Encode({90, Timestamp::Seconds(3)}, Timestamp::Seconds(3));
  EXPECT_NEAR(f.rate.mbps(), 1.0, 0.05 * 2.0);
  EXPECT_NEAR(f.rate.mbps(), 1 + 2 * std::exp(-3.0), 1e-3);
  EXPECT_EQ(f.capture_ts, Timestamp::Seconds(3));
  EXPECT_EQ(f.frame_index, 90u);
}

TEST(VideoEncoderTest, LagIsIndependentOfUpdateSpacing) {
  std::mt19937_64 rng(1);
  VideoEncoder a(AtRate(DataRate::KilobitsPerSec(500)), &rng);
  VideoEncoder b(AtRate(DataRate::KilobitsPerSec(500)), &rng);
  a.SetTargetRate(DataRate::MegabitsPerSec(2), Timestamp::Zero());
  b.SetTargetRate(DataRate::MegabitsPerSec(2), Timestamp::Zero());
  for (int i = 1; i <= 40; ++i)
    a.SetTargetRate(DataRate::MegabitsPerSec(2), Timestamp::Millis(50 * i));
  b.SetTargetRate(DataRate::MegabitsPerSec(2), Timestamp::Seconds(2));
  EXPECT_NEAR(a.actual_rate().bps(), b.actual_rate().bps(), 2);
}

TEST(VideoEncoderTest, RateNeverBelowFloor) {
  std::mt19937_64 rng(1);
  VideoEncoder enc(AtRate(DataRate::MegabitsPerSec(1)), &rng);
  enc.SetTargetRate(DataRate::Zero(), Timestamp::Zero());
  EXPECT_EQ(enc.target_rate(), DataRate::KilobitsPerSec(50));
  enc.SetTargetRate(DataRate::Zero(), Timestamp::Seconds(100));
  EXPECT_GE(enc.actual_rate(), DataRate::KilobitsPerSec(50));
}

TEST(VideoEncoderTest, SmoothedEncodeDelay) {
  std::mt19937_64 rng(1);
  EncoderConfig c;
  c.encode_delay = TimeDelta::Millis(10);
  VideoEncoder enc(c, &rng);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(enc.OnEncodeDelay(TimeDelta::Millis(10)), TimeDelta::Millis(10));
  EXPECT_EQ(enc.OnEncodeDelay(TimeDelta::Millis(20)), TimeDelta::Millis(19));
}

TEST(VideoEncoderTest, EncodeDelayWithinJitter) {
  std::mt19937_64 rng(1);
  VideoEncoder enc(EncoderConfig{}, &rng);
  for (int i = 0; i < 1000; ++i) {
    const TimeDelta d = enc.SampleEncodeDelay();
    ASSERT_GE(d, TimeDelta::Millis(6));
    ASSERT_LE(d, TimeDelta::Millis(10));
  }
}

TEST(VideoEncoderTest, RejectsBadConfig) {
  std::mt19937_64 rng(1);
  EncoderConfig c;
  c.fps = 0;
  EXPECT_THROW(VideoEncoder(c, &rng), std::invalid_argument);
  c = EncoderConfig{};
  c.key_multiplier = 0.5;
  EXPECT_THROW(VideoEncoder(c, &rng), std::invalid_argument);
}

TEST(FrameDropTest, Threshold) {
  EXPECT_TRUE(ShouldDropFrame(TimeDelta::Millis(300), TimeDelta::Millis(80), TimeDelta::Millis(50)));
  EXPECT_FALSE(ShouldDropFrame(TimeDelta::Zero(), TimeDelta::Millis(8), TimeDelta::Millis(50)));
  EXPECT_FALSE(ShouldDropFrame(TimeDelta::Millis(300), TimeDelta::Millis(50), TimeDelta::Millis(50)));
  EXPECT_TRUE(ShouldDropFrame(TimeDelta::Millis(300), TimeDelta::Millis(50),
                              TimeDelta::Millis(50) + TimeDelta::Micros(1)));
  EXPECT_TRUE(ShouldDropFrame(TimeDelta::Zero(), TimeDelta::Zero(), TimeDelta::PlusInfinity()));
}

TEST(VideoSourceTest, CaptureCadenceAndEncoding) {
  EventLoop loop;
  std::mt19937_64 rng(4);
  VideoEncoder enc(AtRate(DataRate::MegabitsPerSec(1)), &rng);
  std::vector<EncodedFrame> out;
  VideoSource src(&loop, &enc, [] { return TimeDelta::Millis(50); },
                  [&](const EncodedFrame& f) { out.push_back(f); }, nullptr);
  src.Start(Timestamp::Zero());
  loop.RunUntil(Timestamp::Seconds(10) - TimeDelta::Micros(1));
  EXPECT_EQ(src.frames_captured(), 300u);
  EXPECT_EQ(src.frames_dropped(), 0u);
  ASSERT_GE(out.size(), 299u);
  for (size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].frame_index, i);
    EXPECT_EQ(out[i].capture_ts, Timestamp::Micros(static_cast<int64_t>(i) * 1000000 / 30));
    const TimeDelta enc_time = out[i].encode_done_ts - out[i].capture_ts;
    EXPECT_GE(enc_time, TimeDelta::Millis(6));
    EXPECT_LE(enc_time, TimeDelta::Millis(10));
  }
}

// Long-run output tracks the target within 10% over 10 s windows.
TEST(VideoSourceTest, OutputRateTracksTarget) {
  EventLoop loop;
  std::mt19937_64 rng(4);
  VideoEncoder enc(AtRate(DataRate::MegabitsPerSec(2)), &rng);
  int64_t bytes = 0;
  VideoSource src(&loop, &enc, [] { return TimeDelta::Millis(50); },
                  [&](const EncodedFrame& f) {
                    if (f.capture_ts >= Timestamp::Seconds(10)) bytes += f.size;
                  },
                  nullptr);
  src.Start(Timestamp::Zero());
  loop.RunUntil(Timestamp::Seconds(20));
  const double mbps = static_cast<double>(bytes) * 8 / 10 / 1e6;
  EXPECT_NEAR(mbps, 2.0, 0.2);
}

TEST(VideoSourceTest, DropsWhenLatencyTooHigh) {
  EventLoop loop;
  std::mt19937_64 rng(4);
  VideoEncoder enc(EncoderConfig{}, &rng);
  int dropped = 0;
  VideoSource src(&loop, &enc, [] { return TimeDelta::Millis(395); }, nullptr,
                  [&](const RawFrame&, Timestamp) { ++dropped; });
  src.Start(Timestamp::Zero());
  loop.RunUntil(Timestamp::Seconds(1) - TimeDelta::Micros(1));
  EXPECT_EQ(dropped, 30);
  EXPECT_EQ(src.frames_encoded(), 0u);
}

TEST(RateControllerTest, SumAndClamp) {
  EXPECT_EQ(RateController::ReferenceRate({DataRate::KilobitsPerSec(1500), DataRate::MegabitsPerSec(2)}),
            DataRate::KilobitsPerSec(3500));
  EXPECT_EQ(RateController::ReferenceRate({DataRate::MegabitsPerSec(3), DataRate::MegabitsPerSec(3)}),
            DataRate::MegabitsPerSec(4));
  EXPECT_EQ(RateController::ReferenceRate({DataRate::KilobitsPerSec(700)}), DataRate::KilobitsPerSec(700));
  EXPECT_EQ(RateController::ReferenceRate({}), RateController::kMinRate);
  RateController rc;
  EXPECT_EQ(rc.OnTick({DataRate::MegabitsPerSec(1)}), DataRate::MegabitsPerSec(1));
  EXPECT_EQ(rc.target(), DataRate::MegabitsPerSec(1));
}

}  // namespace
}  // namespace mprtc
