#include "sqpsim/cross/aimd_flow.h"

#include <algorithm>
#include <cmath>

#include "sqpsim/sim/check.h"

namespace sqpsim::cross {

AimdFlow::AimdFlow(FlowId id, Network& net, AimdConfig config)
    : id_(id),
      net_(net),
      config_(config),
      cwnd_(config.initial_cwnd),
      ssthresh_(config.initial_ssthresh) {
  SQPSIM_CHECK(cwnd_ >= 1, "initial window must be at least one packet");
}

void AimdFlow::Start() {
  if (config_.start >= config_.stop) return;
  net_.loop().Schedule(config_.start, [this] { TrySend(); });
}

void AimdFlow::TrySend() {
  if (net_.Now() >= config_.stop) return;
  while (static_cast<double>(in_flight_.size()) + 1.0 <= cwnd_) {
    Packet pkt;
    pkt.flow_id = id_;
    pkt.size = config_.packet_size;
    pkt.seq = next_seq_++;
    in_flight_.emplace(pkt.seq, net_.Now());
    net_.Send(pkt);
  }
  if (!rto_ && !in_flight_.empty()) ArmRto();
}

void AimdFlow::OnAck(const Packet& pkt) {
  const auto it = in_flight_.find(pkt.seq);
  if (it == in_flight_.end()) return;
  const SimTime rtt = net_.Now() - it->second;
  srtt_ = srtt_ ? SimTime::Micros((7 * srtt_->us() + rtt.us()) / 8) : rtt;

  // Everything sent before this packet and still outstanding was dropped.
  std::optional<uint64_t> lost;
  for (auto l = in_flight_.begin(); l != it; l = in_flight_.erase(l)) {
    lost = l->first;
  }
  in_flight_.erase(it);
  if (lost) {
    OnLoss(*lost);
  } else if (cwnd_ < ssthresh_) {
    cwnd_ += 1.0;
  } else {
    cwnd_ += 1.0 / cwnd_;
  }
  if (rto_) net_.loop().Cancel(*rto_);
  rto_.reset();
  TrySend();
  if (!rto_ && !in_flight_.empty()) ArmRto();
}

void AimdFlow::OnLoss(uint64_t seq) {
  if (recovery_until_ && seq <= *recovery_until_) return;
  cwnd_ = std::max(1.0, cwnd_ / 2.0);
  ssthresh_ = std::max(2.0, cwnd_);
  recovery_until_ = next_seq_ == 0 ? 0 : next_seq_ - 1;
  ++decreases_;
}

SimTime AimdFlow::Rto() const {
  const SimTime base = srtt_.value_or(config_.base_rtt);
  return std::max(config_.min_rto, base * 2);
}

void AimdFlow::ArmRto() {
  rto_ = net_.loop().ScheduleAfter(Rto(), [this] { OnRto(); });
}

void AimdFlow::OnRto() {
  rto_.reset();
  ++timeouts_;
  in_flight_.clear();
  ssthresh_ = std::max(2.0, cwnd_ / 2.0);
  cwnd_ = 1.0;
  recovery_until_ = next_seq_ == 0 ? 0 : next_seq_ - 1;
  TrySend();
}

}  // namespace sqpsim::cross
