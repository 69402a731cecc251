#include "sqpsim/sqp/bandwidth_sampler.h"

#include "sqpsim/sim/check.h"

namespace sqpsim::sqp {

namespace {

// R_end - S_start - delta_min, in microseconds.
std::optional<int64_t> TransportSpanUs(const FrameRecord& frame,
                                       SimTime min_owd) {
  if (!frame.complete()) return std::nullopt;
  const int64_t span = (*frame.recv_end - frame.send_start - min_owd).us();
  if (span <= 0) return std::nullopt;
  return span;
}

}  // namespace

std::optional<BitsPerSecond> BandwidthSample(const FrameRecord& frame,
                                             SimTime min_owd) {
  const auto span = TransportSpanUs(frame, min_owd);
  if (!span) return std::nullopt;
  return static_cast<double>(frame.size) * 8.0 * 1e6 /
         static_cast<double>(*span);
}

std::optional<BitsPerSecond> CorrectedSample(const FrameRecord& frame,
                                             SimTime min_owd) {
  const auto span = TransportSpanUs(frame, min_owd);
  if (!span) return std::nullopt;
  if (frame.full_size <= frame.size) {
    return BandwidthSample(frame, min_owd);
  }
  const double gamma = frame.undershoot_factor();
  const double recv_span =
      static_cast<double>((*frame.recv_end - *frame.recv_start).us());
  const double stretched =
      static_cast<double>(*span) + recv_span * (gamma - 1.0);
  return static_cast<double>(frame.size) * 8.0 * gamma * 1e6 / stretched;
}

BitsPerSecond LossScaledSample(BitsPerSecond sample, const FrameRecord& frame) {
  SQPSIM_CHECK(frame.packets_sent > 0, "frame without packets");
  if (frame.packets_lost == 0) return sample;
  return sample * (1.0 - static_cast<double>(frame.packets_lost) /
                             static_cast<double>(frame.packets_sent));
}

}  // namespace sqpsim::sqp
