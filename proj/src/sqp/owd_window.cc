#include "sqpsim/sqp/owd_window.h"

#include <algorithm>

#include "sqpsim/sim/check.h"

namespace sqpsim::sqp {

void OwdWindow::Add(SimTime observed_at, SimTime owd) {
  SQPSIM_CHECK(!latest_ || observed_at >= latest_->observed_at,
               "owd samples out of order");
  while (!samples_.empty() && samples_.back().owd >= owd) {
    samples_.pop_back();
  }
  samples_.push_back({observed_at, owd});
  latest_ = Sample{observed_at, owd};
}

void OwdWindow::DiscardBefore(SimTime cutoff) {
  while (!samples_.empty() && samples_.front().observed_at < cutoff) {
    samples_.pop_front();
  }
}

std::optional<SimTime> OwdWindow::Min(SimTime now, SimTime window) const {
  if (!latest_) return std::nullopt;
  const SimTime from = now - window;
  const auto it = std::lower_bound(
      samples_.begin(), samples_.end(), from,
      [](const Sample& s, SimTime t) { return s.observed_at < t; });
  if (it == samples_.end() || it->observed_at > now) return latest_->owd;
  return it->owd;
}

}  // namespace sqpsim::sqp
