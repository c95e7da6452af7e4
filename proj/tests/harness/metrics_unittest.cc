#include "mprtc/harness/metrics.h"

#include "gtest/gtest.h"

namespace mprtc {
namespace {

TEST(JainIndexTest, Identities) {
  EXPECT_DOUBLE_EQ(JainIndex({2, 2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(JainIndex({0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(JainIndex({5, 0, 0, 0}), 0.25);
  EXPECT_DOUBLE_EQ(JainIndex({1, 3}), 16.0 / 20.0);
  EXPECT_THROW(JainIndex({}), std::invalid_argument);
  EXPECT_THROW(JainIndex({1, -1}), std::invalid_argument);
}

TEST(JainIndexTest, ScaleInvariantAndBounded) {
  const std::vector<double> x = {1.5, 2.5, 0.7, 3.1};
  std::vector<double> y;
  for (double v : x) y.push_back(v * 1e6);
  EXPECT_NEAR(JainIndex(x), JainIndex(y), 1e-12);
  EXPECT_GE(JainIndex(x), 1.0 / 4);
  EXPECT_LE(JainIndex(x), 1.0);
}

TEST(RateSeriesTest, AverageRate) {
  // 75 MB over 300 s.
  RateSeries r;
  for (int s = 0; s < 300; ++s) r.Add(Timestamp::Seconds(s) + TimeDelta::Millis(500), 250000);
  EXPECT_EQ(r.total_bytes(), 75000000);
  EXPECT_EQ(r.MeanRate(Timestamp::Zero(), Timestamp::Seconds(300)), DataRate::MegabitsPerSec(2));
  EXPECT_EQ(r.RateOfBin(7), DataRate::MegabitsPerSec(2));
}

TEST(RateSeriesTest, WholeBinsOnly) {
  RateSeries r(TimeDelta::Millis(100));
  r.Add(Timestamp::Millis(50), 1000);
  r.Add(Timestamp::Millis(150), 2000);
  r.Add(Timestamp::Millis(250), 3000);
  EXPECT_EQ(r.bins(), 3u);
  // [100, 300) covers bins 1 and 2; a partial window start rounds up.
  EXPECT_EQ(r.MeanRate(Timestamp::Millis(100), Timestamp::Millis(300)),
            DataRate::FromBytesOver(5000, TimeDelta::Millis(200)));
  EXPECT_EQ(r.MeanRate(Timestamp::Millis(101), Timestamp::Millis(300)),
            DataRate::FromBytesOver(3000, TimeDelta::Millis(100)));
  EXPECT_TRUE(r.MeanRate(Timestamp::Millis(200), Timestamp::Millis(200)).IsZero());
  r.PadTo(Timestamp::Seconds(1));
  EXPECT_EQ(r.bins(), 10u);
  EXPECT_TRUE(r.RateOfBin(9).IsZero());
  EXPECT_TRUE(r.RateOfBin(99).IsZero());
}

TEST(MeanAccumulatorTest, Mean) {
  MeanAccumulator m;
  EXPECT_EQ(m.mean(), 0);
  for (double v : {1.0, 2.0, 6.0}) m.Add(v);
  EXPECT_DOUBLE_EQ(m.mean(), 3.0);
  EXPECT_EQ(m.count(), 3u);
}

}  // namespace
}  // namespace mprtc
