#ifndef SQPSIM_METRICS_FRAME_METRICS_H_
#define SQPSIM_METRICS_FRAME_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sqpsim/metrics/timeline.h"

namespace sqpsim::metrics {

// F(t) for one slot, given S over the n-frame window, S over the slot
// itself and the bytes still pending from earlier frames.
double WindowedFrameSize(double s_window, double s_slot, double pending,
                         int n);

// A frame reconstructed from link-ingress bytes.
struct SyntheticFrame {
  int64_t index = 0;
  SimTime slot_start;  // ingress-time domain
  double size = 0;     // bytes, may be fractional
  double pending = 0;  // p at slot_start
  // Bytes assigned to frames 0..index, counted from the origin.
  double cumulative_end = 0;
};

// Splits a flow's ingress into frame slots origin + k*I. Only slots whose
// n-frame window ends by `end` are produced.
std::vector<SyntheticFrame> RetrofitFrames(const FlowTimeline& flow,
                                           SimTime origin, SimTime end,
                                           SimTime interval, int n);

struct FrameDelay {
  int64_t index = 0;
  SimTime created_at;  // sender-time domain
  bool zero_size = false;
  // Ingress time of the packet carrying the frame's last byte.
  std::optional<SimTime> last_byte_ingress;
  std::optional<SimTime> delivered_at;
  SimTime delay;
};

// Replays synthetic frames over the recorded delivery schedule. A byte
// carried by a dropped packet counts as delivered by the next packet of
// the flow that did get through. Frames that never complete are omitted.
std::vector<FrameDelay> SimulatedFrameDelays(
    const FlowTimeline& flow, std::span<const SyntheticFrame> frames,
    SimTime origin, SimTime interval, SimTime owd_fwd);

struct FrameRttSample {
  FrameId frame_id = 0;
  SimTime first_send;
  SimTime last_ack;
  SimTime rtt;
  // Some packet was dropped or never acknowledged; the value covers only
  // the packets that made it.
  bool incomplete = false;
};

// One entry per frame with at least one acknowledged packet, by frame id.
std::vector<FrameRttSample> FrameRtts(const FlowTimeline& flow,
                                      SimTime owd_fwd);

// Nearest-rank percentile, p in [0, 100]. Empty input yields nullopt.
std::optional<double> Percentile(std::vector<double> values, double p);

}  // namespace sqpsim::metrics

#endif  // SQPSIM_METRICS_FRAME_METRICS_H_
