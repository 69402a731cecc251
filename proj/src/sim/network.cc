#include "sqpsim/sim/network.h"

#include "sqpsim/sim/check.h"

namespace sqpsim {

Network::Network(EventLoop& loop, LinkConfig config, TraceRecorder* trace)
    : loop_(loop),
      trace_(trace),
      link_(loop, std::move(config), trace,
            [this](Packet pkt) { OnDelivered(std::move(pkt)); }) {}

void Network::Attach(TrafficFlow* flow) {
  const bool inserted = flows_.emplace(flow->id(), flow).second;
  SQPSIM_CHECK(inserted, "duplicate flow id");
}

PacketId Network::Send(Packet pkt) {
  pkt.packet_id = next_packet_id_++;
  pkt.sent_at = loop_.Now();
  const PacketId id = pkt.packet_id;
  loop_.ScheduleAfter(link_.config().owd_fwd,
                      [this, pkt = std::move(pkt)]() mutable {
                        link_.Enqueue(std::move(pkt));
                      });
  return id;
}

void Network::OnDelivered(Packet pkt) {
  loop_.ScheduleAfter(link_.config().owd_rev, [this, pkt = std::move(pkt)] {
    ++acks_;
    if (trace_) trace_->Record(pkt, TraceEventKind::kAck, loop_.Now());
    const auto it = flows_.find(pkt.flow_id);
    if (it != flows_.end()) it->second->OnAck(pkt);
  });
}

}  // namespace sqpsim
