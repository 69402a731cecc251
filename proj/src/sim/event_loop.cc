#include "sqpsim/sim/event_loop.h"

#include "sqpsim/sim/check.h"

namespace sqpsim {

EventHandle EventLoop::Schedule(SimTime at, Callback cb) {
  SQPSIM_CHECK(at >= now_, "event scheduled in the past");
  const uint64_t seq = next_seq_++;
  events_.emplace(Key{at.us(), seq}, std::move(cb));
  return EventHandle{at, seq};
}

bool EventLoop::Cancel(const EventHandle& handle) {
  return events_.erase(Key{handle.at.us(), handle.seq}) > 0;
}

bool EventLoop::RunOne() {
  if (events_.empty()) return false;
  auto node = events_.extract(events_.begin());
  now_ = SimTime::Micros(node.key().first);
  ++processed_;
  node.mapped()();
  return true;
}

void EventLoop::RunUntil(SimTime end) {
  while (!events_.empty() && events_.begin()->first.first <= end.us()) {
    RunOne();
  }
  if (end > now_) now_ = end;
}

}  // namespace sqpsim
