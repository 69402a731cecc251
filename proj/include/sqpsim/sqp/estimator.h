#ifndef SQPSIM_SQP_ESTIMATOR_H_
#define SQPSIM_SQP_ESTIMATOR_H_

#include "sqpsim/sim/units.h"

namespace sqpsim::sqp {

// Gradient step of the log-reward / quadratic-overshoot utility:
//
//   B' = B + step * (reward * (S/B - 1) - (B/S - 1))
//
// clamped below at `floor_bps`. S is the target-scaled bandwidth sample.
// S == B is the unique positive fixed point and the step always points
// toward S.
BitsPerSecond UpdateEstimate(BitsPerSecond estimate, BitsPerSecond target,
                             BitsPerSecond step_bps, double reward_weight,
                             BitsPerSecond floor_bps);

}  // namespace sqpsim::sqp

#endif  // SQPSIM_SQP_ESTIMATOR_H_
