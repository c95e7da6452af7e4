#include "mprtc/harness/trace_generator.h"

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"

namespace mprtc {
namespace {

std::string Dump(const TraceSchedule& t) {
  std::ostringstream out;
  WriteTrace(out, t);
  return out.str();
}

TEST(TraceGeneratorTest, PoolIsDeterministic) {
  const auto a = GenerateTracePool(7, 10);
  const auto b = GenerateTracePool(7, 10);
  const auto c = GenerateTracePool(8, 10);
  ASSERT_EQ(a.size(), 10u);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(Dump(a[i]), Dump(b[i]));
  EXPECT_NE(Dump(a[0]), Dump(c[0]));
}

TEST(TraceGeneratorTest, StepsAndCapacitiesInRange) {
  const SyntheticTraceParams params;
  for (const TraceSchedule& t : GenerateTracePool(kDefaultTracePoolSeed, 50)) {
    const auto& e = t.entries();
    ASSERT_FALSE(e.empty());
    EXPECT_EQ(e.front().at, Timestamp::Zero());
    EXPECT_GE(t.period(), params.length);
    int64_t lo = INT64_MAX, hi = 0;
    for (size_t i = 0; i < e.size(); ++i) {
      const TimeDelta step = (i + 1 < e.size() ? e[i + 1].at : Timestamp::Zero() + t.period()) -
                             e[i].at;
      if (i + 1 < e.size()) {
        EXPECT_GE(step, params.min_step);
        EXPECT_LE(step, params.max_step);
      }
      lo = std::min(lo, e[i].capacity.bps());
      hi = std::max(hi, e[i].capacity.bps());
    }
    // Every step lies within the spread of one common mean.
    EXPECT_LE(static_cast<double>(hi) / static_cast<double>(lo),
              params.spread * params.spread * 1.01);
    EXPECT_GE(lo, params.min_mean.bps() / params.spread - 1000);
    EXPECT_LE(hi, params.max_mean.bps() * params.spread + 1000);
  }
}

TEST(TraceGeneratorTest, RoundTripsThroughTheTraceFormat) {
  std::mt19937_64 rng(3);
  const TraceSchedule t = GenerateSyntheticTrace(rng);
  std::istringstream in(Dump(t));
  EXPECT_EQ(Dump(ParseTrace(in, "generated")), Dump(t));
}

TEST(TraceGeneratorTest, RejectsEmptyRanges) {
  std::mt19937_64 rng(3);
  SyntheticTraceParams p;
  p.max_mean = DataRate::KilobitsPerSec(100);
  EXPECT_THROW(GenerateSyntheticTrace(rng, p), std::invalid_argument);
  EXPECT_THROW(GenerateTracePool(1, 0), std::invalid_argument);
}

}  // namespace
}  // namespace mprtc
