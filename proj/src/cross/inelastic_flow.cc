#include "sqpsim/cross/inelastic_flow.h"

#include <cmath>

#include "sqpsim/sim/check.h"

namespace sqpsim::cross {

InelasticFlow::InelasticFlow(FlowId id, Network& net, InelasticConfig config)
    : id_(id), net_(net), config_(config) {
  SQPSIM_CHECK(config_.rate_bps > 0 && config_.packet_size > 0,
               "inelastic flow needs a positive rate and packet size");
}

SimTime InelasticFlow::SendTime(uint64_t k) const {
  const double spacing_us =
      static_cast<double>(config_.packet_size) * 8.0 * 1e6 / config_.rate_bps;
  return config_.start +
         SimTime::Micros(static_cast<int64_t>(
             std::floor(static_cast<double>(k) * spacing_us + 0.5)));
}

void InelasticFlow::Start() {
  if (config_.start >= config_.stop) return;
  net_.loop().Schedule(config_.start, [this] { SendNext(); });
}

void InelasticFlow::SendNext() {
  Packet pkt;
  pkt.flow_id = id_;
  pkt.size = config_.packet_size;
  pkt.seq = sent_++;
  net_.Send(pkt);
  const SimTime next = SendTime(sent_);
  if (next < config_.stop) {
    net_.loop().Schedule(next, [this] { SendNext(); });
  }
}

}  // namespace sqpsim::cross
