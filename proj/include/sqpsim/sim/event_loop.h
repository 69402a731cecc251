#ifndef SQPSIM_SIM_EVENT_LOOP_H_
#define SQPSIM_SIM_EVENT_LOOP_H_

#include <cstdint>
#include <functional>
#include <map>
#include <utility>

#include "sqpsim/sim/units.h"

namespace sqpsim {

// Handle returned by EventLoop::Schedule. Valid until the event fires or is
// cancelled.
struct EventHandle {
  SimTime at;
  uint64_t seq = 0;
};

// Single-threaded discrete-event scheduler. Events with equal timestamps fire
// in insertion order.
class EventLoop {
 public:
  using Callback = std::function<void()>;

  EventLoop() = default;
  EventLoop(const EventLoop&) = delete;
  EventLoop& operator=(const EventLoop&) = delete;

  // Scheduling in the past aborts.
  EventHandle Schedule(SimTime at, Callback cb);
  EventHandle ScheduleAfter(SimTime delay, Callback cb) {
    return Schedule(now_ + delay, std::move(cb));
  }
  // Returns false if the event already fired or was cancelled.
  bool Cancel(const EventHandle& handle);

  // Processes events with time <= end, then advances the clock to end.
  void RunUntil(SimTime end);
  // Processes the earliest pending event. Returns false when none remain.
  bool RunOne();

  SimTime Now() const { return now_; }
  size_t Pending() const { return events_.size(); }
  uint64_t Processed() const { return processed_; }

 private:
  using Key = std::pair<int64_t, uint64_t>;

  SimTime now_;
  uint64_t next_seq_ = 0;
  uint64_t processed_ = 0;
  std::map<Key, Callback> events_;
};

}  // namespace sqpsim

#endif  // SQPSIM_SIM_EVENT_LOOP_H_
