#ifndef SQPSIM_SIM_PACKET_H_
#define SQPSIM_SIM_PACKET_H_

#include <cstdint>
#include <optional>

#include "sqpsim/sim/units.h"

namespace sqpsim {

using FlowId = int32_t;
using PacketId = uint64_t;
using FrameId = int64_t;

struct Packet {
  PacketId packet_id = 0;
  FlowId flow_id = 0;
  ByteCount size = 0;
  std::optional<FrameId> frame_id;
  // Per-flow transmission sequence number, assigned by the sender.
  uint64_t seq = 0;
  SimTime sent_at;
  // Time the last bit left the bottleneck, i.e. receipt at the far end.
  std::optional<SimTime> delivered_at;
  bool dropped = false;
};

}  // namespace sqpsim

#endif  // SQPSIM_SIM_PACKET_H_
