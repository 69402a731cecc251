#include "sqpsim/sqp/sqp_controller.h"

#include <algorithm>
#include <string>

#include "sqpsim/sim/check.h"
#include "sqpsim/sqp/bandwidth_sampler.h"
#include "sqpsim/sqp/estimator.h"

namespace sqpsim::sqp {

std::optional<std::string> SqpParams::Validate() const {
  if (!(pacing_multiplier > 1.0)) return "pacing multiplier m must be > 1";
  if (!(target_multiplier > 0.0 && target_multiplier < 1.0)) {
    return "target multiplier T must be in (0, 1)";
  }
  if (!(step_bps > 0)) return "step size delta must be positive";
  if (!(reward_weight >= 0)) return "reward weight r must be >= 0";
  if (!(owd_window_multiplier > 0)) return "owd window multiplier must be > 0";
  if (!(floor_bps > 0)) return "rate floor must be positive";
  if (!(initial_bps > 0)) return "initial rate must be positive";
  if (!(srtt_gain > 0 && srtt_gain <= 1)) return "srtt gain must be in (0, 1]";
  if (!(frame_timeout_srtts > 0)) return "frame timeout must be positive";
  return std::nullopt;
}

SqpController::SqpController(SqpParams params)
    : params_(params),
      estimate_(std::max(params.initial_bps, params.floor_bps)) {
  const auto err = params_.Validate();
  SQPSIM_CHECK(!err, err ? err->c_str() : "");
}

void SqpController::OnFrameQueued(FrameId frame, ByteCount bytes,
                                  ByteCount full_size, int packets) {
  SQPSIM_CHECK(packets > 0 && bytes > 0, "empty frame");
  PendingFrame f;
  f.bytes = bytes;
  f.full_size = std::max(full_size, bytes);
  f.packets = packets;
  frames_[frame] = f;
}

void SqpController::OnPacketSent(FrameId frame, SimTime at) {
  auto it = frames_.find(frame);
  if (it == frames_.end()) return;
  if (!it->second.send_start) it->second.send_start = at;
  ++it->second.packets_sent;
}

SimTime SqpController::FrameTimeout() const {
  return srtt_.value_or(params_.initial_rtt).Scaled(params_.frame_timeout_srtts);
}

std::optional<FrameOutcome> SqpController::OnPacketFeedback(const Packet& pkt,
                                                            SimTime now) {
  if (!pkt.frame_id || !pkt.delivered_at) {
    ++unknown_feedback_;
    return std::nullopt;
  }
  auto it = frames_.find(*pkt.frame_id);
  if (it == frames_.end()) {
    ++unknown_feedback_;
    return std::nullopt;
  }
  PendingFrame& f = it->second;
  const SimTime recv = *pkt.delivered_at;
  if (!f.recv_start || recv < *f.recv_start) f.recv_start = recv;
  if (!f.recv_end || recv > *f.recv_end) f.recv_end = recv;
  ++f.packets_acked;

  owd_window_.Add(now, recv - pkt.sent_at);
  if (srtt_) {
    owd_window_.DiscardBefore(now - srtt_->Scaled(params_.owd_retention_srtts));
  }

  if (f.packets_acked < f.packets) return std::nullopt;
  const SimTime rtt = now - *f.send_start;
  srtt_ = srtt_ ? SimTime::Micros(srtt_->us() +
                                  static_cast<int64_t>(std::llround(
                                      params_.srtt_gain *
                                      static_cast<double>((rtt - *srtt_).us()))))
                : rtt;
  const PendingFrame done = f;
  frames_.erase(it);
  return Resolve(*pkt.frame_id, done, now, /*timed_out=*/false);
}

std::optional<FrameOutcome> SqpController::OnFrameTimeout(FrameId frame,
                                                          SimTime now) {
  auto it = frames_.find(frame);
  if (it == frames_.end()) return std::nullopt;
  const PendingFrame done = it->second;
  frames_.erase(it);
  ++timed_out_frames_;
  return Resolve(frame, done, now, /*timed_out=*/true);
}

FrameOutcome SqpController::Resolve(FrameId id, const PendingFrame& f,
                                    SimTime now, bool timed_out) {
  FrameOutcome out;
  out.timed_out = timed_out;
  out.completed_at = now;
  FrameRecord& rec = out.record;
  rec.frame_id = id;
  rec.size = f.bytes;
  rec.full_size = params_.undershoot_correction ? f.full_size : f.bytes;
  rec.packets_sent = f.packets_sent;
  rec.packets_lost = f.packets_sent - f.packets_acked;
  rec.send_start = f.send_start.value_or(now);
  rec.recv_start = f.recv_start;
  rec.recv_end = f.recv_end;

  const SimTime window =
      srtt_.value_or(params_.initial_rtt).Scaled(params_.owd_window_multiplier);
  out.min_owd = owd_window_.Min(now, window).value_or(SimTime::Zero());

  std::optional<BitsPerSecond> sample;
  if (rec.packets_sent > 0 && rec.complete()) {
    sample = CorrectedSample(rec, out.min_owd);
  }
  if (sample) {
    out.sample = LossScaledSample(*sample, rec);
    out.target_sample = *out.sample * params_.target_multiplier;
  }
  if (out.target_sample && *out.target_sample > 0) {
    estimate_ = UpdateEstimate(estimate_, *out.target_sample,
                               params_.step_bps, params_.reward_weight,
                               params_.floor_bps);
    ++updates_;
  } else {
    ++rejected_samples_;
  }
  out.estimate_after = estimate_;
  out.pacing_after = pacing_rate();
  return out;
}

}  // namespace sqpsim::sqp
