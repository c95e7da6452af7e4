#ifndef MPRTC_SIMNET_EVENT_LOOP_H_
#define MPRTC_SIMNET_EVENT_LOOP_H_

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mprtc/simnet/units.h"

namespace mprtc {

class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using EventId = uint64_t;

// Single-threaded discrete-event engine. Events at equal timestamps fire in
// the order they were scheduled.
class EventLoop {
 public:
  using Callback = std::function<void()>;

  EventLoop() = default;
  EventLoop(const EventLoop&) = delete;
  EventLoop& operator=(const EventLoop&) = delete;

  // Throws SchedulingError when `at` lies before now().
  EventId Schedule(Timestamp at, Callback cb);
  EventId ScheduleAfter(TimeDelta delay, Callback cb) {
    return Schedule(now_ + delay, std::move(cb));
  }
  // Cancelling an event that already fired or was never scheduled is a no-op.
  void Cancel(EventId id);

  // Runs every event with fire time <= end, then advances the clock to end.
  void RunUntil(Timestamp end);
  // Runs until no events remain.
  void Run();

  Timestamp now() const { return now_; }
  size_t pending() const { return queue_.size() - cancelled_.size(); }
  uint64_t events_fired() const { return fired_; }

 private:
  struct Entry {
    Timestamp at;
    EventId id;
    // Heap order: earliest time first, then lowest id.
    bool operator>(const Entry& o) const {
      return at != o.at ? at > o.at : id > o.id;
    }
  };
  bool PopNext(Timestamp end);

  Timestamp now_ = Timestamp::Zero();
  EventId next_id_ = 1;
  uint64_t fired_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue_;
  std::unordered_map<EventId, Callback> callbacks_;
  std::unordered_set<EventId> cancelled_;
};

}  // namespace mprtc

#endif  // MPRTC_SIMNET_EVENT_LOOP_H_
