#include "sqpsim/metrics/timeline.h"

#include <algorithm>
#include <unordered_map>

namespace sqpsim::metrics {

FlowTimeline::FlowTimeline(std::vector<PacketTimeline> packets)
    : packets_(std::move(packets)) {
  std::stable_sort(packets_.begin(), packets_.end(),
                   [](const PacketTimeline& a, const PacketTimeline& b) {
                     return a.ingress < b.ingress;
                   });
  cumulative_.reserve(packets_.size());
  ByteCount total = 0;
  for (const auto& p : packets_) {
    total += p.size;
    cumulative_.push_back(total);
  }
}

size_t FlowTimeline::FirstAtOrAfter(SimTime t) const {
  auto it = std::lower_bound(
      packets_.begin(), packets_.end(), t,
      [](const PacketTimeline& p, SimTime v) { return p.ingress < v; });
  return static_cast<size_t>(it - packets_.begin());
}

ByteCount FlowTimeline::IngressBytes(SimTime t1, SimTime t2) const {
  if (t2 <= t1) return 0;
  const size_t a = FirstAtOrAfter(t1);
  const size_t b = FirstAtOrAfter(t2);
  if (b == 0 || a >= b) return 0;
  return cumulative_[b - 1] - (a == 0 ? 0 : cumulative_[a - 1]);
}

std::map<FlowId, FlowTimeline> BuildTimelines(
    std::span<const TraceEvent> events) {
  std::unordered_map<PacketId, PacketTimeline> by_id;
  std::vector<PacketId> order;
  for (const auto& ev : events) {
    auto [it, inserted] = by_id.try_emplace(ev.packet_id);
    auto& p = it->second;
    if (inserted) {
      p.packet_id = ev.packet_id;
      p.flow_id = ev.flow_id;
      p.frame_id = ev.frame_id;
      p.size = ev.size;
      p.ingress = SimTime::Max();
      order.push_back(ev.packet_id);
    }
    switch (ev.kind) {
      case TraceEventKind::kEnqueue:
        p.ingress = ev.at;
        break;
      case TraceEventKind::kDrop:
        p.ingress = ev.at;
        p.dropped = true;
        break;
      case TraceEventKind::kDequeue:
        p.dequeued = ev.at;
        break;
      case TraceEventKind::kAck:
        p.acked = ev.at;
        break;
    }
  }
  std::map<FlowId, std::vector<PacketTimeline>> grouped;
  for (PacketId id : order) {
    auto& p = by_id[id];
    if (p.ingress == SimTime::Max()) continue;
    grouped[p.flow_id].push_back(p);
  }
  std::map<FlowId, FlowTimeline> out;
  for (auto& [flow, pkts] : grouped) {
    out.emplace(flow, FlowTimeline(std::move(pkts)));
  }
  return out;
}

}  // namespace sqpsim::metrics
