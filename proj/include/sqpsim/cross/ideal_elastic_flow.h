#ifndef SQPSIM_CROSS_IDEAL_ELASTIC_FLOW_H_
#define SQPSIM_CROSS_IDEAL_ELASTIC_FLOW_H_

#include <optional>

#include "sqpsim/sim/network.h"

namespace sqpsim::cross {

struct IdealElasticConfig {
  SimTime update_period = SimTime::Millis(100);
  BitsPerSecond initial_rate_bps = 1e6;
  ByteCount packet_size = 1200;
  SimTime start;
  SimTime stop = SimTime::Max();
};

// Hypothetical elastic competitor that fills exactly the capacity left over
// by everyone else without keeping a standing queue. It reads the other
// flows' service rate and the minimum queue occupancy directly from the
// bottleneck (omniscient), and paces its packets evenly.
class IdealElasticFlow : public TrafficFlow {
 public:
  IdealElasticFlow(FlowId id, Network& net, IdealElasticConfig config);

  FlowId id() const override { return id_; }
  std::string_view kind() const override { return "ideal_elastic"; }
  void Start() override;
  void OnAck(const Packet&) override {}

  BitsPerSecond current_rate() const { return rate_; }

 private:
  void Update();
  void SendNext();
  void ScheduleNextSend();

  FlowId id_;
  Network& net_;
  IdealElasticConfig config_;
  BitsPerSecond rate_;
  ByteCount others_mark_ = 0;
  SimTime last_send_;
  std::optional<EventHandle> next_send_;
  uint64_t sent_ = 0;
};

}  // namespace sqpsim::cross

#endif  // SQPSIM_CROSS_IDEAL_ELASTIC_FLOW_H_
