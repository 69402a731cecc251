#ifndef SQPSIM_SQP_SQP_SENDER_H_
#define SQPSIM_SQP_SQP_SENDER_H_

#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "sqpsim/sim/network.h"
#include "sqpsim/sqp/encoder_target_filter.h"
#include "sqpsim/sqp/sqp_controller.h"
#include "sqpsim/video/video_source.h"

namespace sqpsim::sqp {

struct SqpFlowConfig {
  SqpParams params;
  video::VideoConfig video;
  double hysteresis_up = 0.10;
  double hysteresis_down = 0.05;
  SimTime start;
  SimTime stop = SimTime::Max();
};

// One row of the per-frame debug log.
struct FrameLogEntry {
  FrameId frame_id = 0;
  SimTime send_start;
  std::optional<SimTime> recv_end;
  SimTime min_owd;
  std::optional<BitsPerSecond> sample;
  std::optional<BitsPerSecond> target_sample;
  BitsPerSecond estimate = 0;
  BitsPerSecond pacing = 0;
  BitsPerSecond encoder_target = 0;
  SimTime completed_at;
  bool timed_out = false;
};

// Per-frame delivery bookkeeping kept for evaluation.
struct FrameStats {
  FrameId frame_id = 0;
  SimTime created_at;
  ByteCount size = 0;
  ByteCount full_size = 0;
  BitsPerSecond encoder_target = 0;
  std::optional<SimTime> last_delivery;
  std::optional<SimTime> last_ack;
  int packets = 0;
  int packets_acked = 0;

  bool delivered() const { return packets_acked == packets; }
  // Creation to receipt of the last packet.
  std::optional<SimTime> delay() const {
    if (!delivered() || !last_delivery) return std::nullopt;
    return *last_delivery - created_at;
  }
};

inline constexpr std::string_view kFrameLogCsvHeader =
    "frame_id,S_start_us,R_end_us,delta_min_us,sample_bps,target_sample_bps,"
    "B_bps,pacing_bps,encoder_target_bps";

void WriteFrameLogCsv(std::ostream& out,
                      const std::vector<FrameLogEntry>& entries);

// A video flow driven by SQP: generates frames at the encoder target,
// paces each frame at m * B and feeds acknowledgements back into the
// controller.
class SqpSender : public TrafficFlow {
 public:
  SqpSender(FlowId id, Network& net, SqpFlowConfig config, SplitMix64 rng);

  FlowId id() const override { return id_; }
  std::string_view kind() const override { return "sqp"; }
  void Start() override;
  void OnAck(const Packet& pkt) override;

  const SqpController& controller() const { return controller_; }
  const EncoderTargetFilter& encoder_filter() const { return filter_; }
  const std::vector<FrameLogEntry>& frame_log() const { return frame_log_; }
  const std::map<FrameId, FrameStats>& frames() const { return frames_; }
  const SqpFlowConfig& config() const { return config_; }

 private:
  struct QueuedPacket {
    Packet pkt;
    bool last_of_frame = false;
  };

  void EmitFrame();
  void PumpPacer();
  void SendHead();
  void Record(const FrameOutcome& outcome);

  FlowId id_;
  Network& net_;
  SqpFlowConfig config_;
  SqpController controller_;
  EncoderTargetFilter filter_;
  video::VideoSource source_;

  std::deque<QueuedPacket> pacer_queue_;
  bool pacer_scheduled_ = false;
  SimTime next_send_allowed_;
  uint64_t next_seq_ = 0;

  std::vector<FrameLogEntry> frame_log_;
  std::map<FrameId, FrameStats> frames_;
};

}  // namespace sqpsim::sqp

#endif  // SQPSIM_SQP_SQP_SENDER_H_
