#include "mprtc/simnet/event_loop.h"

#include <string>

namespace mprtc {

EventId EventLoop::Schedule(Timestamp at, Callback cb) {
  if (at < now_) {
    throw SchedulingError("event scheduled at " + std::to_string(at.us()) +
                          "us, before now " + std::to_string(now_.us()) + "us");
  }
  const EventId id = next_id_++;
  queue_.push(Entry{at, id});
  callbacks_.emplace(id, std::move(cb));
  return id;
}

void EventLoop::Cancel(EventId id) {
  auto it = callbacks_.find(id);
  if (it == callbacks_.end()) return;
  callbacks_.erase(it);
  cancelled_.insert(id);
}

bool EventLoop::PopNext(Timestamp end) {
  while (!queue_.empty()) {
    const Entry top = queue_.top();
    if (top.at > end) return false;
    queue_.pop();
    if (cancelled_.erase(top.id) > 0) continue;
    auto it = callbacks_.find(top.id);
    Callback cb = std::move(it->second);
    callbacks_.erase(it);
    now_ = top.at;
    ++fired_;
    cb();
    return true;
  }
  return false;
}

void EventLoop::RunUntil(Timestamp end) {
  while (PopNext(end)) {
  }
  if (end > now_) now_ = end;
}

void EventLoop::Run() {
  while (PopNext(Timestamp::PlusInfinity())) {
  }
}

}  // namespace mprtc
