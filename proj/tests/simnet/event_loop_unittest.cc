#include "mprtc/simnet/event_loop.h"

#include <vector>

#include "gtest/gtest.h"

namespace mprtc {
namespace {

TEST(EventLoopTest, FiresInTimeOrder) {
  EventLoop loop;
  std::vector<int> order;
  loop.Schedule(Timestamp::Millis(30), [&] { order.push_back(3); });
  loop.Schedule(Timestamp::Millis(10), [&] { order.push_back(1); });
  loop.Schedule(Timestamp::Millis(20), [&] { order.push_back(2); });
  loop.Run();
  EXPECT_EQ(order, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(loop.now(), Timestamp::Millis(30));
}

TEST(EventLoopTest, EqualTimestampsFireInInsertionOrder) {
  EventLoop loop;
  std::vector<int> order;
  for (int i = 0; i < 50; ++i)
    loop.Schedule(Timestamp::Millis(5), [&order, i] { order.push_back(i); });
  loop.Run();
  ASSERT_EQ(order.size(), 50u);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(order[i], i);
}

TEST(EventLoopTest, ZeroDelayRunsAfterCurrentEvent) {
  EventLoop loop;
  std::vector<int> order;
  loop.Schedule(Timestamp::Millis(1), [&] {
    loop.ScheduleAfter(TimeDelta::Zero(), [&] { order.push_back(2); });
    order.push_back(1);
  });
  loop.Schedule(Timestamp::Millis(1), [&] { order.push_back(3); });
  loop.Run();
  // The zero-delay event was inserted after the second top-level one.
  EXPECT_EQ(order, (std::vector<int>{1, 3, 2}));
}

TEST(EventLoopTest, RunUntilIsInclusive) {
  EventLoop loop;
  bool fired = false;
  loop.Schedule(Timestamp::Seconds(400), [&] { fired = true; });
  loop.RunUntil(Timestamp::Seconds(400));
  EXPECT_TRUE(fired);
}

TEST(EventLoopTest, RunUntilAdvancesClockAndLeavesLaterEvents) {
  EventLoop loop;
  bool fired = false;
  loop.Schedule(Timestamp::Seconds(5), [&] { fired = true; });
  loop.RunUntil(Timestamp::Seconds(2));
  EXPECT_FALSE(fired);
  EXPECT_EQ(loop.now(), Timestamp::Seconds(2));
  EXPECT_EQ(loop.pending(), 1u);
}

TEST(EventLoopTest, RejectsPastEvents) {
  EventLoop loop;
  loop.RunUntil(Timestamp::Seconds(1));
  EXPECT_THROW(loop.Schedule(Timestamp::Millis(999), [] {}), SchedulingError);
}

TEST(EventLoopTest, CancelledEventNeverFires) {
  EventLoop loop;
  int fired = 0;
  const EventId id = loop.Schedule(Timestamp::Millis(1), [&] { ++fired; });
  loop.Schedule(Timestamp::Millis(2), [&] { ++fired; });
  loop.Cancel(id);
  loop.Cancel(id);
  loop.Cancel(12345);
  loop.Run();
  EXPECT_EQ(fired, 1);
}

TEST(EventLoopTest, ClockIsMonotone) {
  EventLoop loop;
  Timestamp last = Timestamp::Zero();
  bool monotone = true;
  std::function<void(int)> chain = [&](int n) {
    if (loop.now() < last) monotone = false;
    last = loop.now();
    if (n > 0) loop.ScheduleAfter(TimeDelta::Micros(n % 7), [&, n] { chain(n - 1); });
  };
  loop.Schedule(Timestamp::Zero(), [&] { chain(200); });
  loop.Run();
  EXPECT_TRUE(monotone);
}

}  // namespace
}  // namespace mprtc
