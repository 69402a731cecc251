#ifndef SQPSIM_METRICS_TIMELINE_H_
#define SQPSIM_METRICS_TIMELINE_H_

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sqpsim/sim/packet.h"
#include "sqpsim/sim/trace.h"
#include "sqpsim/sim/units.h"

namespace sqpsim::metrics {

// Everything the trace says about one packet.
struct PacketTimeline {
  PacketId packet_id = 0;
  FlowId flow_id = 0;
  std::optional<FrameId> frame_id;
  ByteCount size = 0;
  SimTime ingress;  // enqueue or drop time
  bool dropped = false;
  std::optional<SimTime> dequeued;
  std::optional<SimTime> acked;
};

// Packets of one flow in link-ingress order, with a running byte count so
// S(t1, t2) is two binary searches.
class FlowTimeline {
 public:
  FlowTimeline() = default;
  explicit FlowTimeline(std::vector<PacketTimeline> packets);

  std::span<const PacketTimeline> packets() const { return packets_; }
  bool empty() const { return packets_.empty(); }

  // Bytes offered to the link (accepted or dropped) in [t1, t2).
  ByteCount IngressBytes(SimTime t1, SimTime t2) const;
  // Index of the first packet whose ingress is at or after t.
  size_t FirstAtOrAfter(SimTime t) const;
  // Cumulative ingress bytes through packet i, inclusive.
  ByteCount CumulativeThrough(size_t i) const { return cumulative_[i]; }

 private:
  std::vector<PacketTimeline> packets_;
  std::vector<ByteCount> cumulative_;
};

// Groups events by packet. Packets without an ingress event are ignored.
std::map<FlowId, FlowTimeline> BuildTimelines(
    std::span<const TraceEvent> events);

}  // namespace sqpsim::metrics

#endif  // SQPSIM_METRICS_TIMELINE_H_
