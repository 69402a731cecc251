#include "sqpsim/sqp/encoder_target_filter.h"

#include <algorithm>

#include "sqpsim/sim/check.h"

namespace sqpsim::sqp {

EncoderTargetFilter::EncoderTargetFilter(BitsPerSecond initial,
                                         double up_threshold,
                                         double down_threshold,
                                         BitsPerSecond floor_bps)
    : current_(std::max(initial, floor_bps)),
      up_(up_threshold),
      down_(down_threshold),
      floor_(floor_bps) {
  SQPSIM_CHECK(up_ >= 0 && down_ >= 0 && down_ < 1, "bad hysteresis band");
}

BitsPerSecond EncoderTargetFilter::Update(BitsPerSecond estimate) {
  if (estimate > current_ * (1.0 + up_) ||
      estimate < current_ * (1.0 - down_)) {
    const BitsPerSecond next = std::max(estimate, floor_);
    if (next != current_) {
      current_ = next;
      ++changes_;
    }
  }
  return current_;
}

}  // namespace sqpsim::sqp
