#ifndef SQPSIM_SQP_FRAME_RECORD_H_
#define SQPSIM_SQP_FRAME_RECORD_H_

#include <optional>

#include "sqpsim/sim/packet.h"
#include "sqpsim/sim/units.h"

namespace sqpsim::sqp {

// Delivery statistics of one video frame, as seen by the sender once all of
// its packets are resolved. `size` is the whole frame as sent; lost packets
// are excluded from `recv_start` and `recv_end` only, and loss scaling
// brings the sample back down to what was delivered.
struct FrameRecord {
  FrameId frame_id = 0;
  ByteCount size = 0;       // F: bytes sent
  ByteCount full_size = 0;  // F_max: frame size without encoder undershoot
  int packets_sent = 0;
  int packets_lost = 0;
  SimTime send_start;                 // S_start
  std::optional<SimTime> recv_start;  // R_start
  std::optional<SimTime> recv_end;    // R_end

  bool complete() const { return recv_start && recv_end && size > 0; }
  // gamma = F_max / F, never below 1.
  double undershoot_factor() const {
    if (full_size <= size) return 1.0;
    return static_cast<double>(full_size) / static_cast<double>(size);
  }
};

}  // namespace sqpsim::sqp

#endif  // SQPSIM_SQP_FRAME_RECORD_H_
