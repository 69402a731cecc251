#ifndef SQPSIM_SQP_SQP_CONTROLLER_H_
#define SQPSIM_SQP_SQP_CONTROLLER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "sqpsim/sim/packet.h"
#include "sqpsim/sim/units.h"
#include "sqpsim/sqp/frame_record.h"
#include "sqpsim/sqp/owd_window.h"

namespace sqpsim::sqp {

struct SqpParams {
  double pacing_multiplier = 2.0;   // m, > 1
  double target_multiplier = 0.9;   // T, in (0, 1)
  BitsPerSecond step_bps = 320e3;   // delta
  double reward_weight = 0.25;      // r
  double owd_window_multiplier = 2.0;
  BitsPerSecond initial_bps = 1.5e6;
  // Two 1200-byte packets per frame at 60 fps.
  BitsPerSecond floor_bps = 2.0 * 1200 * 8 * 60;
  bool undershoot_correction = true;

  double srtt_gain = 1.0 / 8.0;
  // Frames still missing acks this many sRTTs after their last packet left
  // the sender are resolved with the missing packets counted as lost.
  double frame_timeout_srtts = 4.0;
  // Used for timeouts until the first frame RTT is measured.
  SimTime initial_rtt = SimTime::Millis(250);
  // OWD samples older than this many sRTTs are discarded.
  double owd_retention_srtts = 8.0;

  // Empty when valid, otherwise a description of the first bad field.
  std::optional<std::string> Validate() const;
};

// What the controller did with one resolved frame.
struct FrameOutcome {
  FrameRecord record;
  bool timed_out = false;
  SimTime completed_at;
  SimTime min_owd;
  std::optional<BitsPerSecond> sample;         // after correction and loss
  std::optional<BitsPerSecond> target_sample;  // sample * T
  BitsPerSecond estimate_after = 0;
  BitsPerSecond pacing_after = 0;
};

// The SQP congestion controller: tracks frames pending delivery, turns their
// delivery statistics into bandwidth samples and folds those into the
// bandwidth estimate that sets both the pacing rate and the video bitrate.
class SqpController {
 public:
  explicit SqpController(SqpParams params);

  // Interval tracker input from the sender side.
  void OnFrameQueued(FrameId frame, ByteCount bytes, ByteCount full_size,
                     int packets);
  void OnPacketSent(FrameId frame, SimTime at);

  // Acknowledgement for a packet of a tracked frame. Returns the outcome
  // when this ack completes the frame.
  std::optional<FrameOutcome> OnPacketFeedback(const Packet& pkt,
                                               SimTime now);
  // Resolves the frame if it is still pending. Returns nullopt otherwise.
  std::optional<FrameOutcome> OnFrameTimeout(FrameId frame, SimTime now);

  // Deadline after the last send of a frame, based on the current sRTT.
  SimTime FrameTimeout() const;

  BitsPerSecond estimate() const { return estimate_; }
  BitsPerSecond pacing_rate() const {
    return params_.pacing_multiplier * estimate_;
  }
  std::optional<SimTime> srtt() const { return srtt_; }
  const OwdWindow& owd_window() const { return owd_window_; }
  const SqpParams& params() const { return params_; }
  size_t pending_frames() const { return frames_.size(); }

  uint64_t unknown_feedback() const { return unknown_feedback_; }
  uint64_t rejected_samples() const { return rejected_samples_; }
  uint64_t timed_out_frames() const { return timed_out_frames_; }
  uint64_t updates() const { return updates_; }

 private:
  struct PendingFrame {
    ByteCount bytes = 0;
    ByteCount full_size = 0;
    int packets = 0;
    int packets_sent = 0;
    int packets_acked = 0;
    std::optional<SimTime> send_start;
    std::optional<SimTime> recv_start;
    std::optional<SimTime> recv_end;
  };

  FrameOutcome Resolve(FrameId id, const PendingFrame& f, SimTime now,
                       bool timed_out);

  SqpParams params_;
  BitsPerSecond estimate_;
  std::optional<SimTime> srtt_;
  OwdWindow owd_window_;
  std::map<FrameId, PendingFrame> frames_;

  uint64_t unknown_feedback_ = 0;
  uint64_t rejected_samples_ = 0;
  uint64_t timed_out_frames_ = 0;
  uint64_t updates_ = 0;
};

}  // namespace sqpsim::sqp

#endif  // SQPSIM_SQP_SQP_CONTROLLER_H_
