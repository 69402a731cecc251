#ifndef SQPSIM_SQP_ENCODER_TARGET_FILTER_H_
#define SQPSIM_SQP_ENCODER_TARGET_FILTER_H_

#include "sqpsim/sim/units.h"

namespace sqpsim::sqp {

// Hysteresis between the bandwidth estimate and the encoder bitrate. The
// target follows the estimate only when it leaves the band
// [target * (1 - down), target * (1 + up)], and never drops below the
// minimum rate that still yields two packets per frame.
class EncoderTargetFilter {
 public:
  EncoderTargetFilter(BitsPerSecond initial, double up_threshold,
                      double down_threshold, BitsPerSecond floor_bps);

  BitsPerSecond Update(BitsPerSecond estimate);
  BitsPerSecond current() const { return current_; }
  uint64_t changes() const { return changes_; }

 private:
  BitsPerSecond current_;
  double up_;
  double down_;
  BitsPerSecond floor_;
  uint64_t changes_ = 0;
};

}  // namespace sqpsim::sqp

#endif  // SQPSIM_SQP_ENCODER_TARGET_FILTER_H_
