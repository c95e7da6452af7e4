#include "mprtc/transport/packetizer.h"

#include <random>

#include "gtest/gtest.h"

namespace mprtc {
namespace {

TEST(PacketizerTest, CeilingSplit) {
  FrameDescriptor f{4, Timestamp::Millis(133), 3000, true};
  const auto segs = Packetize(f, 100, 1200);
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[0].payload_length(), 1200u);
  EXPECT_EQ(segs[1].payload_length(), 1200u);
  EXPECT_EQ(segs[2].payload_length(), 600u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(segs[i].total_segments, 3);
    EXPECT_EQ(segs[i].segment_index, i);
    EXPECT_EQ(segs[i].frame_index, 4u);
    EXPECT_TRUE(segs[i].key_frame);
    EXPECT_EQ(segs[i].capture_ts, Timestamp::Millis(133));
  }
  EXPECT_EQ(segs[0].stream_offset, 100u);
  EXPECT_EQ(segs[1].stream_offset, 1300u);
  EXPECT_EQ(segs[2].stream_offset, 2500u);
}

TEST(PacketizerTest, OneByteFrame) {
  const auto segs = Packetize({1, Timestamp::Zero(), 1, false}, 0);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].segment_index, 0);
  EXPECT_EQ(segs[0].total_segments, 1);
}

TEST(PacketizerTest, CoverageProperty) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int64_t> size(1, 200000);
  for (int i = 0; i < 500; ++i) {
    const int64_t n = size(rng);
    const auto segs = Packetize({0, Timestamp::Zero(), n, false}, 0);
    int64_t sum = 0;
    for (size_t k = 0; k < segs.size(); ++k) {
      if (k + 1 < segs.size()) ASSERT_EQ(segs[k].payload_length(), size_t{kMaxStreamPayload});
      ASSERT_LE(segs[k].payload_length(), size_t{kMaxStreamPayload});
      ASSERT_EQ(segs[k].stream_offset, static_cast<uint64_t>(sum));
      sum += static_cast<int64_t>(segs[k].payload_length());
    }
    ASSERT_EQ(sum, n);
  }
}

TEST(PacketizerTest, FullSegmentFitsThePacketBudget) {
  Packet p;
  StreamFrame s;
  s.payload.resize(kMaxStreamPayload);
  p.frames.emplace_back(s);
  p.frames.emplace_back(StopWaitingFrame{1});
  EXPECT_EQ(EncodedSize(p), static_cast<size_t>(kMaxPacketSize));
}

TEST(PacketizerTest, RejectsBadInput) {
  EXPECT_THROW(Packetize({0, Timestamp::Zero(), 0, false}, 0), std::invalid_argument);
  EXPECT_THROW(Packetize({0, Timestamp::Zero(), 10, false}, 0, 0), std::invalid_argument);
  EXPECT_THROW(Packetize({0, Timestamp::Zero(), 70000, false}, 0, 1), std::invalid_argument);
}

}  // namespace
}  // namespace mprtc
