#include "mprtc/scheduler/multipath_scheduler.h"

#include <random>
#include <sstream>

#include "gtest/gtest.h"

namespace mprtc {
namespace {

StreamFrame Seg(size_t bytes, bool key = false) {
  StreamFrame s;
  s.payload.assign(bytes, 0);
  s.key_frame = key;
  s.total_segments = 1;
  return s;
}

std::vector<StreamFrame> Segs(int n, size_t bytes, bool key = false) {
  return std::vector<StreamFrame>(static_cast<size_t>(n), Seg(bytes, key));
}

// Sends everything queued on `subflow` at `now`.
std::vector<SegmentId> Drain(MultipathScheduler& s, int subflow, Timestamp now) {
  std::vector<SegmentId> sent;
  while (auto id = s.NextQueued(subflow, now)) {
    s.OnSent(subflow, *id, now);
    sent.push_back(*id);
  }
  return sent;
}

TEST(MultipathSchedulerTest, SrttSmoothing) {
  MultipathScheduler s(1);
  EXPECT_FALSE(s.srtt(0).has_value());
  EXPECT_EQ(s.UpdateSrtt(0, TimeDelta::Millis(100)), TimeDelta::Millis(100));
  EXPECT_EQ(s.UpdateSrtt(0, TimeDelta::Millis(200)), TimeDelta::Millis(185));
}

TEST(MultipathSchedulerTest, ExpectedLatency) {
  MultipathScheduler s(1);
  EXPECT_TRUE(s.ExpectedLatency(0).IsInfinite());
  s.UpdateSrtt(0, TimeDelta::Millis(100));
  EXPECT_TRUE(s.ExpectedLatency(0).IsInfinite());
  s.SetBandwidth(0, DataRate::MegabitsPerSec(1));
  EXPECT_EQ(s.ExpectedLatency(0), TimeDelta::Millis(50));
  s.AddSegments({Seg(12500)}, Timestamp::Zero());
  // 50 ms + 12500 B * 8 / 1 Mbps.
  EXPECT_EQ(s.ExpectedLatency(0), TimeDelta::Millis(150));
}

TEST(MultipathSchedulerTest, PicksLeastLatencyAndBreaksTiesLow) {
  MultipathScheduler s(3);
  for (int i = 0; i < 3; ++i) {
    s.UpdateSrtt(i, TimeDelta::Millis(100));
    s.SetBandwidth(i, DataRate::MegabitsPerSec(1));
  }
  s.UpdateSrtt(2, TimeDelta::Millis(60));
  s.AddSegments({Seg(1000)}, Timestamp::Zero());
  EXPECT_EQ(s.entry(0)->subflow, 2);
  // 40 ms queued on subflow 2 puts it above the others; 0 and 1 tie.
  s.AddSegments({Seg(5000)}, Timestamp::Zero());
  EXPECT_EQ(s.entry(1)->subflow, 2);
  s.AddSegments({Seg(1000)}, Timestamp::Zero());
  EXPECT_EQ(s.entry(2)->subflow, 0);
}

TEST(MultipathSchedulerTest, EqualSubflowsAlternate) {
  MultipathScheduler s(2);
  for (int i = 0; i < 2; ++i) {
    s.UpdateSrtt(i, TimeDelta::Millis(80));
    s.SetBandwidth(i, DataRate::MegabitsPerSec(2));
  }
  const auto ids = s.AddSegments(Segs(10, 1000), Timestamp::Zero());
  for (size_t k = 0; k < ids.size(); ++k) EXPECT_EQ(s.entry(ids[k])->subflow, static_cast<int>(k % 2));
  EXPECT_EQ(s.queued_bytes(0), 5000);
  EXPECT_EQ(s.queued_bytes(1), 5000);
}

TEST(MultipathSchedulerTest, WaitsForSchedulableSubflow) {
  MultipathScheduler s(2);
  s.AddSegments(Segs(3, 500), Timestamp::Zero());
  EXPECT_EQ(s.pending_count(), 3u);
  s.SetBandwidth(1, DataRate::MegabitsPerSec(1));
  s.UpdateSrtt(1, TimeDelta::Millis(50));
  s.AssignPending(Timestamp::Millis(1));
  EXPECT_EQ(s.pending_count(), 0u);
  EXPECT_EQ(s.queue_length(1), 3u);
}

// Replays the decision log against an independent greedy assignment.
TEST(MultipathSchedulerTest, DecisionLogMatchesGreedyOracle) {
  std::mt19937_64 rng(21);
  const int kSubflows = 3;
  MultipathScheduler s(kSubflows);
  s.set_decision_logging(true);
  std::vector<double> srtt_ms(kSubflows), bw_bps(kSubflows), queued(kSubflows, 0);
  Timestamp now = Timestamp::Zero();
  for (int step = 0; step < 300; ++step) {
    now += TimeDelta::Millis(5);
    for (int i = 0; i < kSubflows; ++i) {
      srtt_ms[i] = static_cast<double>(20 + rng() % 200);
      bw_bps[i] = static_cast<double>(100000 + rng() % 5000000);
      s.ResetSrtt(i, TimeDelta::Millis(static_cast<int64_t>(srtt_ms[i])));
      s.SetBandwidth(i, DataRate::BitsPerSec(static_cast<int64_t>(bw_bps[i])));
    }
    const size_t first = s.decisions().size();
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<size_t> sizes;
    std::vector<StreamFrame> segs;
    for (int k = 0; k < n; ++k) {
      sizes.push_back(1 + rng() % 1155);
      segs.push_back(Seg(sizes.back()));
    }
    s.AddSegments(segs, now);
    ASSERT_EQ(s.decisions().size(), first + static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
      int best = 0;
      double best_ms = 0;
      for (int i = 0; i < kSubflows; ++i) {
        const double l = srtt_ms[i] / 2 + queued[i] * 8 / bw_bps[i] * 1000;
        if (i == 0 || l < best_ms - 1e-3) {
          best = i;
          best_ms = l;
        }
      }
      const auto& d = s.decisions()[first + static_cast<size_t>(k)];
      ASSERT_EQ(d.subflow, best) << step << "/" << k;
      ASSERT_NEAR(d.latencies[static_cast<size_t>(best)].ms(), best_ms, 1e-3);
      queued[static_cast<size_t>(best)] += static_cast<double>(sizes[static_cast<size_t>(k)]);
    }
    // Randomly transmit some queues.
    for (int i = 0; i < kSubflows; ++i) {
      if (rng() % 2) continue;
      for (SegmentId id : Drain(s, i, now)) s.OnAcked(id);
      queued[static_cast<size_t>(i)] = 0;
    }
  }
  std::ostringstream log;
  s.WriteDecisionLog(log);
  EXPECT_EQ(log.str().rfind("time_s,segment,subflow,retransmission,lambda_0_ms,lambda_1_ms,"
                            "lambda_2_ms\n", 0),
            0u);
}

TEST(MultipathSchedulerTest, KeyFrameSegmentsAreNeverAgedOut) {
  MultipathScheduler s(1);
  s.UpdateSrtt(0, TimeDelta::Millis(100));
  s.SetBandwidth(0, DataRate::MegabitsPerSec(1));
  const auto ids = s.AddSegments({Seg(1000, true), Seg(1000, false)}, Timestamp::Zero());
  Drain(s, 0, Timestamp::Zero());
  s.Evict(Timestamp::Seconds(5));
  EXPECT_TRUE(s.IsRetained(ids[0], Timestamp::Seconds(5)));
  EXPECT_FALSE(s.IsRetained(ids[1], Timestamp::Seconds(5)));
  EXPECT_EQ(s.buffer_size(), 1u);
  // Still retransmitted after 5 s.
  EXPECT_TRUE(s.OnLost(ids[0], Timestamp::Seconds(5)));
  EXPECT_EQ(s.stats().key_age_evictions, 0u);
}

TEST(MultipathSchedulerTest, NonKeySegmentsExpireAfterCacheTime) {
  MultipathScheduler s(1);
  s.UpdateSrtt(0, TimeDelta::Millis(100));
  s.SetBandwidth(0, DataRate::MegabitsPerSec(1));
  const auto ids = s.AddSegments(Segs(2, 1000), Timestamp::Zero());
  Drain(s, 0, Timestamp::Zero());
  // Lost at exactly 400 ms: still retransmitted.
  EXPECT_TRUE(s.OnLost(ids[0], Timestamp::Millis(400)));
  // Lost 401 ms after the first send: dropped.
  EXPECT_FALSE(s.OnLost(ids[1], Timestamp::Millis(401)));
  EXPECT_EQ(s.entry(ids[1]), nullptr);
  // The queued retransmission ages out before it can be sent.
  EXPECT_FALSE(s.NextQueued(0, Timestamp::Millis(401)).has_value());
  EXPECT_EQ(s.stats().abandoned, 2u);
  EXPECT_LE(s.stats().max_nonkey_retx_age, MultipathScheduler::kCacheTime);
}

TEST(MultipathSchedulerTest, UnsentSegmentsDoNotAge) {
  MultipathScheduler s(1);
  s.UpdateSrtt(0, TimeDelta::Millis(100));
  s.SetBandwidth(0, DataRate::MegabitsPerSec(1));
  const auto ids = s.AddSegments(Segs(1, 1000), Timestamp::Zero());
  s.Evict(Timestamp::Seconds(3));
  EXPECT_TRUE(s.IsRetained(ids[0], Timestamp::Seconds(3)));
  EXPECT_EQ(s.NextQueued(0, Timestamp::Seconds(3)), ids[0]);
}

TEST(MultipathSchedulerTest, RetransmissionGoesToCurrentBestSubflow) {
  MultipathScheduler s(2);
  for (int i = 0; i < 2; ++i) s.SetBandwidth(i, DataRate::MegabitsPerSec(1));
  s.UpdateSrtt(0, TimeDelta::Millis(50));
  s.UpdateSrtt(1, TimeDelta::Millis(100));
  const auto ids = s.AddSegments(Segs(2, 1000), Timestamp::Zero());
  EXPECT_EQ(s.entry(ids[0])->subflow, 0);
  Drain(s, 0, Timestamp::Zero());
  Drain(s, 1, Timestamp::Zero());
  s.ResetSrtt(0, TimeDelta::Millis(400));
  ASSERT_TRUE(s.OnLost(ids[0], Timestamp::Millis(100)));
  EXPECT_EQ(s.entry(ids[0])->subflow, 1);
  // Retransmissions jump the queue.
  s.AddSegments(Segs(1, 1000), Timestamp::Millis(100));
  EXPECT_EQ(s.NextQueued(1, Timestamp::Millis(100)), ids[0]);
  EXPECT_EQ(s.stats().retransmissions, 1u);
}

TEST(MultipathSchedulerTest, OutstandingCopySuppressesRetransmission) {
  MultipathScheduler s(1);
  s.UpdateSrtt(0, TimeDelta::Millis(100));
  s.SetBandwidth(0, DataRate::MegabitsPerSec(1));
  const auto ids = s.AddSegments(Segs(1, 1000), Timestamp::Zero());
  Drain(s, 0, Timestamp::Zero());
  ASSERT_TRUE(s.OnLost(ids[0], Timestamp::Millis(10)));
  // Already queued for retransmission.
  EXPECT_FALSE(s.OnLost(ids[0], Timestamp::Millis(10)));
  EXPECT_EQ(s.queue_length(0), 1u);
  Drain(s, 0, Timestamp::Millis(10));
  Drain(s, 0, Timestamp::Millis(10));
  EXPECT_EQ(s.entry(ids[0])->outstanding, 1);
  s.OnAcked(ids[0]);
  EXPECT_EQ(s.entry(ids[0]), nullptr);
  EXPECT_FALSE(s.OnLost(ids[0], Timestamp::Millis(20)));
}

// Q always equals the payload bytes waiting on the subflow's queue.
TEST(MultipathSchedulerTest, QueueBookkeepingProperty) {
  std::mt19937_64 rng(5);
  MultipathScheduler s(2);
  for (int i = 0; i < 2; ++i) {
    s.UpdateSrtt(i, TimeDelta::Millis(60 + 40 * i));
    s.SetBandwidth(i, DataRate::MegabitsPerSec(1 + i));
  }
  Timestamp now = Timestamp::Zero();
  std::vector<SegmentId> in_flight;
  for (int step = 0; step < 4000; ++step) {
    now += TimeDelta::Millis(static_cast<int64_t>(rng() % 20));
    switch (rng() % 5) {
      case 0:
        s.AddSegments({Seg(1 + rng() % 1155, rng() % 10 == 0)}, now);
        break;
      case 1: {
        const int sf = static_cast<int>(rng() % 2);
        if (auto id = s.NextQueued(sf, now)) {
          s.OnSent(sf, *id, now);
          in_flight.push_back(*id);
        }
        break;
      }
      case 2:
        if (!in_flight.empty()) {
          const size_t k = rng() % in_flight.size();
          s.OnAcked(in_flight[k]);
          in_flight.erase(in_flight.begin() + static_cast<long>(k));
        }
        break;
      case 3:
        if (!in_flight.empty()) {
          const size_t k = rng() % in_flight.size();
          s.OnLost(in_flight[k], now);
          in_flight.erase(in_flight.begin() + static_cast<long>(k));
        }
        break;
      default:
        s.Evict(now);
    }
    for (int sf = 0; sf < 2; ++sf) {
      ASSERT_GE(s.queued_bytes(sf), 0);
      if (s.queue_length(sf) == 0) ASSERT_EQ(s.queued_bytes(sf), 0);
    }
    ASSERT_EQ(s.stats().key_age_evictions, 0u);
    ASSERT_LE(s.stats().max_nonkey_retx_age, MultipathScheduler::kCacheTime);
  }
}

}  // namespace
}  // namespace mprtc
