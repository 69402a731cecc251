#ifndef SQPSIM_SQP_OWD_WINDOW_H_
#define SQPSIM_SQP_OWD_WINDOW_H_

#include <deque>
#include <optional>

#include "sqpsim/sim/units.h"

namespace sqpsim::sqp {

// Windowed minimum of one-way delay samples whose window length is chosen
// per query. Samples must be added in non-decreasing observation time.
//
// Internally a monotonic deque: a sample is dropped once a later sample is
// no larger, since it can never again be the minimum of any suffix. The
// minimum over [now - window, now] is the first retained sample inside it.
class OwdWindow {
 public:
  struct Sample {
    SimTime observed_at;
    SimTime owd;
  };

  void Add(SimTime observed_at, SimTime owd);
  // Physically discards samples observed before `cutoff`.
  void DiscardBefore(SimTime cutoff);

  // Minimum over samples observed in [now - window, now]. When that range is
  // empty, falls back to the most recent sample. nullopt if never fed.
  std::optional<SimTime> Min(SimTime now, SimTime window) const;

  std::optional<Sample> latest() const { return latest_; }
  size_t retained() const { return samples_.size(); }

 private:
  std::deque<Sample> samples_;
  std::optional<Sample> latest_;
};

}  // namespace sqpsim::sqp

#endif  // SQPSIM_SQP_OWD_WINDOW_H_
