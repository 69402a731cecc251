#include "sqpsim/sqp/sqp_sender.h"

#include <algorithm>
#include <ostream>

#include "sqpsim/sim/text.h"

namespace sqpsim::sqp {

void WriteFrameLogCsv(std::ostream& out,
                      const std::vector<FrameLogEntry>& entries) {
  auto opt = [&out](const std::optional<double>& v) {
    if (v) out << text::FormatDouble(*v);
  };
  out << kFrameLogCsvHeader << '\n';
  for (const auto& e : entries) {
    out << e.frame_id << ',' << e.send_start.us() << ',';
    if (e.recv_end) out << e.recv_end->us();
    out << ',' << e.min_owd.us() << ',';
    opt(e.sample);
    out << ',';
    opt(e.target_sample);
    out << ',' << text::FormatDouble(e.estimate) << ','
        << text::FormatDouble(e.pacing) << ','
        << text::FormatDouble(e.encoder_target) << '\n';
  }
}

SqpSender::SqpSender(FlowId id, Network& net, SqpFlowConfig config,
                     SplitMix64 rng)
    : id_(id),
      net_(net),
      config_(std::move(config)),
      controller_(config_.params),
      filter_(config_.params.initial_bps, config_.hysteresis_up,
              config_.hysteresis_down, config_.video.FloorBps()),
      source_(config_.video, rng) {}

void SqpSender::Start() {
  net_.loop().Schedule(config_.start, [this] { EmitFrame(); });
}

void SqpSender::EmitFrame() {
  const SimTime now = net_.Now();
  if (now >= config_.stop) return;
  const BitsPerSecond target = filter_.Update(controller_.estimate());
  const auto emission = source_.NextFrame(target, now);
  const video::Frame& frame = emission.frame;
  const auto sizes = video::Packetize(frame.size, config_.video.mtu);

  controller_.OnFrameQueued(frame.frame_id, frame.size, frame.full_size,
                            static_cast<int>(sizes.size()));
  FrameStats stats;
  stats.frame_id = frame.frame_id;
  stats.created_at = now;
  stats.size = frame.size;
  stats.full_size = frame.full_size;
  stats.encoder_target = target;
  stats.packets = static_cast<int>(sizes.size());
  frames_[frame.frame_id] = stats;

  for (size_t i = 0; i < sizes.size(); ++i) {
    Packet pkt;
    pkt.flow_id = id_;
    pkt.size = sizes[i];
    pkt.frame_id = frame.frame_id;
    pacer_queue_.push_back({pkt, i + 1 == sizes.size()});
  }
  PumpPacer();
  if (emission.next_at < config_.stop) {
    net_.loop().Schedule(emission.next_at, [this] { EmitFrame(); });
  }
}

void SqpSender::PumpPacer() {
  if (pacer_scheduled_ || pacer_queue_.empty()) return;
  pacer_scheduled_ = true;
  net_.loop().Schedule(std::max(net_.Now(), next_send_allowed_),
                       [this] { SendHead(); });
}

void SqpSender::SendHead() {
  pacer_scheduled_ = false;
  QueuedPacket head = std::move(pacer_queue_.front());
  pacer_queue_.pop_front();
  const SimTime now = net_.Now();
  head.pkt.seq = next_seq_++;
  const FrameId frame = *head.pkt.frame_id;
  const ByteCount size = head.pkt.size;
  controller_.OnPacketSent(frame, now);
  net_.Send(std::move(head.pkt));
  next_send_allowed_ = now + TransmitTime(size, controller_.pacing_rate());
  if (head.last_of_frame) {
    net_.loop().ScheduleAfter(controller_.FrameTimeout(), [this, frame] {
      if (auto outcome = controller_.OnFrameTimeout(frame, net_.Now())) {
        Record(*outcome);
      }
    });
  }
  PumpPacer();
}

void SqpSender::OnAck(const Packet& pkt) {
  if (pkt.frame_id) {
    auto it = frames_.find(*pkt.frame_id);
    if (it != frames_.end()) {
      FrameStats& s = it->second;
      ++s.packets_acked;
      if (!s.last_delivery || *pkt.delivered_at > *s.last_delivery) {
        s.last_delivery = pkt.delivered_at;
      }
      s.last_ack = net_.Now();
    }
  }
  if (auto outcome = controller_.OnPacketFeedback(pkt, net_.Now())) {
    Record(*outcome);
  }
}

void SqpSender::Record(const FrameOutcome& outcome) {
  FrameLogEntry e;
  e.frame_id = outcome.record.frame_id;
  e.send_start = outcome.record.send_start;
  e.recv_end = outcome.record.recv_end;
  e.min_owd = outcome.min_owd;
  e.sample = outcome.sample;
  e.target_sample = outcome.target_sample;
  e.estimate = outcome.estimate_after;
  e.pacing = outcome.pacing_after;
  e.encoder_target = filter_.current();
  e.completed_at = outcome.completed_at;
  e.timed_out = outcome.timed_out;
  frame_log_.push_back(e);
}

}  // namespace sqpsim::sqp
