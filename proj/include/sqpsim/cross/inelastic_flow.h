#ifndef SQPSIM_CROSS_INELASTIC_FLOW_H_
#define SQPSIM_CROSS_INELASTIC_FLOW_H_

#include "sqpsim/sim/network.h"

namespace sqpsim::cross {

struct InelasticConfig {
  BitsPerSecond rate_bps = 0;
  ByteCount packet_size = 1200;
  SimTime start;
  SimTime stop = SimTime::Max();
};

// Constant-bit-rate sender. Packet k leaves at start + round(k * size*8/R),
// so spacing never drifts.
class InelasticFlow : public TrafficFlow {
 public:
  InelasticFlow(FlowId id, Network& net, InelasticConfig config);

  FlowId id() const override { return id_; }
  std::string_view kind() const override { return "inelastic"; }
  void Start() override;
  void OnAck(const Packet&) override {}

  uint64_t packets_sent() const { return sent_; }
  SimTime SendTime(uint64_t k) const;

 private:
  void SendNext();

  FlowId id_;
  Network& net_;
  InelasticConfig config_;
  uint64_t sent_ = 0;
};

}  // namespace sqpsim::cross

#endif  // SQPSIM_CROSS_INELASTIC_FLOW_H_
