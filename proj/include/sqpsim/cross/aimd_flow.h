#ifndef SQPSIM_CROSS_AIMD_FLOW_H_
#define SQPSIM_CROSS_AIMD_FLOW_H_

#include <map>
#include <optional>

#include "sqpsim/sim/network.h"

namespace sqpsim::cross {

struct AimdConfig {
  ByteCount packet_size = 1200;
  double initial_cwnd = 10;
  double initial_ssthresh = 1e9;
  // Seeds the retransmission timer before the first RTT sample.
  SimTime base_rtt = SimTime::Millis(40);
  SimTime min_rto = SimTime::Millis(200);
  SimTime start;
  SimTime stop = SimTime::Max();
};

// Reno-shaped window-limited bulk sender used as queue-building cross
// traffic. Slow start, then +1 packet per RTT; halves the window at most once
// per window of data when a gap in the acknowledgement stream reveals a drop
// (the path never reorders). A retransmission timeout collapses the window
// to one packet. Data is not retransmitted.
class AimdFlow : public TrafficFlow {
 public:
  AimdFlow(FlowId id, Network& net, AimdConfig config);

  FlowId id() const override { return id_; }
  std::string_view kind() const override { return "aimd"; }
  void Start() override;
  void OnAck(const Packet& pkt) override;

  // Multiplicative decrease for a drop of packet `seq`. Ignored while still
  // recovering from a decrease that covered `seq`.
  void OnLoss(uint64_t seq);

  double cwnd() const { return cwnd_; }
  double ssthresh() const { return ssthresh_; }
  size_t in_flight() const { return in_flight_.size(); }
  uint64_t decreases() const { return decreases_; }
  uint64_t timeouts() const { return timeouts_; }

 private:
  void TrySend();
  void ArmRto();
  void OnRto();
  SimTime Rto() const;

  FlowId id_;
  Network& net_;
  AimdConfig config_;
  double cwnd_;
  double ssthresh_;
  uint64_t next_seq_ = 0;
  // Sequence numbers at or below this were sent before the last decrease.
  std::optional<uint64_t> recovery_until_;
  std::map<uint64_t, SimTime> in_flight_;
  std::optional<SimTime> srtt_;
  std::optional<EventHandle> rto_;
  uint64_t decreases_ = 0;
  uint64_t timeouts_ = 0;
};

}  // namespace sqpsim::cross

#endif  // SQPSIM_CROSS_AIMD_FLOW_H_
