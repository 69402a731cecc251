#ifndef SQPSIM_SIM_NETWORK_H_
#define SQPSIM_SIM_NETWORK_H_

#include <map>
#include <string_view>

#include "sqpsim/sim/event_loop.h"
#include "sqpsim/sim/link.h"
#include "sqpsim/sim/packet.h"
#include "sqpsim/sim/trace.h"

namespace sqpsim {

// A traffic endpoint attached to the network. Flows schedule their own
// transmissions on the event loop and receive per-packet acknowledgements.
class TrafficFlow {
 public:
  virtual ~TrafficFlow() = default;

  virtual FlowId id() const = 0;
  virtual std::string_view kind() const = 0;
  // Called once before the loop runs.
  virtual void Start() = 0;
  // Called when the acknowledgement for `pkt` reaches the sender. Carries the
  // receiver timestamp in pkt.delivered_at.
  virtual void OnAck(const Packet& pkt) = 0;
};

// Sender -> forward propagation -> bottleneck -> receiver, and a lossless
// reverse path that returns one acknowledgement per delivered packet after
// owd_rev.
class Network {
 public:
  Network(EventLoop& loop, LinkConfig config, TraceRecorder* trace);
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  void Attach(TrafficFlow* flow);

  // Stamps packet_id and sent_at; the packet reaches the bottleneck after
  // owd_fwd. Returns the assigned id.
  PacketId Send(Packet pkt);

  EventLoop& loop() { return loop_; }
  BottleneckLink& link() { return link_; }
  const BottleneckLink& link() const { return link_; }
  SimTime Now() const { return loop_.Now(); }

  uint64_t acks_delivered() const { return acks_; }

 private:
  void OnDelivered(Packet pkt);

  EventLoop& loop_;
  TraceRecorder* trace_;
  BottleneckLink link_;
  std::map<FlowId, TrafficFlow*> flows_;
  PacketId next_packet_id_ = 0;
  uint64_t acks_ = 0;
};

}  // namespace sqpsim

#endif  // SQPSIM_SIM_NETWORK_H_
