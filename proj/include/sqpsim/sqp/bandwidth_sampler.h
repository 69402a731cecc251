#ifndef SQPSIM_SQP_BANDWIDTH_SAMPLER_H_
#define SQPSIM_SQP_BANDWIDTH_SAMPLER_H_

#include <optional>

#include "sqpsim/sqp/frame_record.h"

namespace sqpsim::sqp {

// End-to-end frame transport rate: the frame's bytes over the time from the
// first send to the last receipt, less the baseline one-way delay. Returns
// nullopt when the frame is incomplete or the denominator is not positive.
std::optional<BitsPerSecond> BandwidthSample(const FrameRecord& frame,
                                             SimTime min_owd);

// Undershoot-corrected sample: extrapolates the delivery of a small frame to
// its full size F_max by stretching the receive span by (gamma - 1), with
// gamma = F_max / F. Identical to BandwidthSample when F_max == F.
std::optional<BitsPerSecond> CorrectedSample(const FrameRecord& frame,
                                             SimTime min_owd);

// Scales a sample by the delivered fraction of the frame's packets.
BitsPerSecond LossScaledSample(BitsPerSecond sample, const FrameRecord& frame);

}  // namespace sqpsim::sqp

#endif  // SQPSIM_SQP_BANDWIDTH_SAMPLER_H_
