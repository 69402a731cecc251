#include "sqpsim/cross/ideal_elastic_flow.h"

#include <algorithm>

#include "sqpsim/sim/check.h"

namespace sqpsim::cross {

namespace {
// Keeps the flow probing at a trickle when the link is fully taken.
constexpr BitsPerSecond kMinRateBps = 10e3;
}  // namespace

IdealElasticFlow::IdealElasticFlow(FlowId id, Network& net,
                                   IdealElasticConfig config)
    : id_(id), net_(net), config_(config), rate_(config.initial_rate_bps) {
  SQPSIM_CHECK(config_.update_period > SimTime::Zero(),
               "update period must be positive");
  SQPSIM_CHECK(rate_ > 0, "initial rate must be positive");
}

void IdealElasticFlow::Start() {
  if (config_.start >= config_.stop) return;
  net_.loop().Schedule(config_.start, [this] {
    const auto& link = net_.link();
    others_mark_ = link.TotalDequeuedBytes() - link.DequeuedBytes(id_);
    net_.link().ResetMinQueueLength();
    SendNext();
    net_.loop().ScheduleAfter(config_.update_period, [this] { Update(); });
  });
}

void IdealElasticFlow::Update() {
  if (net_.Now() >= config_.stop) return;
  auto& link = net_.link();
  const ByteCount others = link.TotalDequeuedBytes() - link.DequeuedBytes(id_);
  const BitsPerSecond others_rate =
      RateOver(others - others_mark_, config_.update_period);
  others_mark_ = others;
  // Bytes that sat in the queue for the whole period.
  const ByteCount standing =
      static_cast<ByteCount>(link.MinQueueLength()) * link.config().mtu;
  link.ResetMinQueueLength();
  const BitsPerSecond drain = RateOver(standing, config_.update_period);
  rate_ = std::max(kMinRateBps,
                   link.config().CapacityBps() - others_rate - drain);
  ScheduleNextSend();
  net_.loop().ScheduleAfter(config_.update_period, [this] { Update(); });
}

void IdealElasticFlow::SendNext() {
  next_send_.reset();
  const SimTime now = net_.Now();
  if (now >= config_.stop) return;
  Packet pkt;
  pkt.flow_id = id_;
  pkt.size = config_.packet_size;
  pkt.seq = sent_++;
  net_.Send(pkt);
  last_send_ = now;
  ScheduleNextSend();
}

// (Re)arms the next transmission one packet spacing at the current rate
// after the previous one.
void IdealElasticFlow::ScheduleNextSend() {
  if (next_send_) net_.loop().Cancel(*next_send_);
  const SimTime at = std::max(
      net_.Now(), last_send_ + TransmitTime(config_.packet_size, rate_));
  next_send_ = net_.loop().Schedule(at, [this] { SendNext(); });
}

}  // namespace sqpsim::cross
