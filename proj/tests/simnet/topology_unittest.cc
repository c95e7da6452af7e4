#include "mprtc/simnet/topology.h"

#include "gtest/gtest.h"

namespace mprtc {
namespace {

TEST(TopologyTest, TableOneCaseOne) {
  const LinkConfig l1 = DumbbellBottleneck(1);
  EXPECT_EQ(l1.capacity, DataRate::MegabitsPerSec(3));
  EXPECT_EQ(l1.owd, TimeDelta::Millis(50));
  EXPECT_EQ(l1.queue_capacity_bytes, 37500);
  EXPECT_THROW(DumbbellBottleneck(0), TopologyError);
  EXPECT_THROW(DumbbellBottleneck(13), TopologyError);
}

TEST(TopologyTest, TableTwoCaseThree) {
  const auto links = RttUnfairnessLinks(3);
  EXPECT_EQ(links[0].capacity, DataRate::MegabitsPerSec(10));
  EXPECT_EQ(links[0].owd, TimeDelta::Millis(20));
  EXPECT_EQ(links[0].queue_capacity_bytes, 250000);
  EXPECT_EQ(links[1].capacity, DataRate::MegabitsPerSec(4));
  EXPECT_EQ(links[1].owd, TimeDelta::Millis(10));
  EXPECT_EQ(links[4].capacity, DataRate::MegabitsPerSec(10));
  EXPECT_EQ(links[4].owd, TimeDelta::Millis(30));
  EXPECT_THROW(RttUnfairnessLinks(4), TopologyError);
}

TEST(TopologyTest, DumbbellSharesBottleneck) {
  EventLoop loop;
  std::mt19937_64 rng(1);
  TopologyConfig c;
  c.kind = TopologyKind::kDumbbell;
  auto net = BuildTopology(c, &loop, rng);
  for (int i = 0; i < 3; ++i) {
    const Route& r = net->route(FlowRouteName(i));
    ASSERT_EQ(r.links.size(), 3u);
    EXPECT_EQ(r.links[1], net->link_id("L1"));
    EXPECT_TRUE(net->HasRoute(ReverseRouteName(FlowRouteName(i))));
  }
  EXPECT_EQ(net->BottleneckAt(FlowRouteName(0), Timestamp::Zero()), DataRate::MegabitsPerSec(3));
}

TEST(TopologyTest, RttRoutesDifferInDelay) {
  EventLoop loop;
  std::mt19937_64 rng(1);
  TopologyConfig c;
  c.kind = TopologyKind::kRttUnfairness;
  c.case_id = 2;
  auto net = BuildTopology(c, &loop, rng);
  EXPECT_EQ(net->PropagationDelay(FlowRouteName(0)), TimeDelta::Millis(30));
  EXPECT_EQ(net->PropagationDelay(FlowRouteName(1)), TimeDelta::Millis(50));
}

TEST(TopologyTest, OverridesApplyAndUnknownNamesFail) {
  EventLoop loop;
  std::mt19937_64 rng(1);
  TopologyConfig c;
  c.kind = TopologyKind::kDumbbell;
  c.overrides.push_back({"L1", DataRate::MegabitsPerSec(5), std::nullopt,
                         TimeDelta::Millis(200), std::nullopt});
  auto net = BuildTopology(c, &loop, rng);
  EXPECT_EQ(net->link(net->link_id("L1")).config().queue_capacity_bytes, 125000);
  c.overrides = {{"L9", DataRate::MegabitsPerSec(5), std::nullopt, std::nullopt, std::nullopt}};
  EXPECT_THROW(BuildTopology(c, &loop, rng), TopologyError);
}

TopologyConfig Overlay() {
  TopologyConfig c;
  c.kind = TopologyKind::kMultipathOverlay;
  for (int i = 0; i < 4; ++i)
    c.path_traces.push_back(TraceSchedule::Constant(DataRate::MegabitsPerSec(1 + i)));
  return c;
}

TEST(TopologyTest, OverlayDelaysAreSeededAndInRange) {
  EventLoop loop;
  std::mt19937_64 rng_a(42), rng_b(42);
  auto a = BuildTopology(Overlay(), &loop, rng_a);
  auto b = BuildTopology(Overlay(), &loop, rng_b);
  for (int s = 0; s < 2; ++s) {
    for (int p = 0; p < 2; ++p) {
      const std::string r = PathRouteName(s, p);
      EXPECT_EQ(a->PropagationDelay(r), b->PropagationDelay(r));
      EXPECT_GE(a->PropagationDelay(r), TimeDelta::Millis(50));
      EXPECT_LE(a->PropagationDelay(r), TimeDelta::Millis(100));
      EXPECT_EQ(a->route(r).links.size(), p == 0 ? 1u : 2u);
      EXPECT_EQ(a->BottleneckAt(r, Timestamp::Zero()), DataRate::MegabitsPerSec(1 + 2 * s + p));
    }
  }
}

TEST(TopologyTest, OverlayNeedsTraces) {
  EventLoop loop;
  std::mt19937_64 rng(1);
  TopologyConfig c = Overlay();
  c.path_traces.pop_back();
  EXPECT_THROW(BuildTopology(c, &loop, rng), TopologyError);
  EXPECT_THROW(ParseTopologyKind("ring"), TopologyError);
  EXPECT_EQ(ParseTopologyKind("rtt"), TopologyKind::kRttUnfairness);
}

}  // namespace
}  // namespace mprtc
