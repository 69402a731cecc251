#include "sqpsim/sqp/estimator.h"

#include <algorithm>

#include "sqpsim/sim/check.h"

namespace sqpsim::sqp {

BitsPerSecond UpdateEstimate(BitsPerSecond estimate, BitsPerSecond target,
                             BitsPerSecond step_bps, double reward_weight,
                             BitsPerSecond floor_bps) {
  SQPSIM_CHECK(estimate > 0 && target > 0, "rates must be positive");
  const double gain = reward_weight * (target / estimate - 1.0) -
                      (estimate / target - 1.0);
  return std::max(floor_bps, estimate + step_bps * gain);
}

}  // namespace sqpsim::sqp
