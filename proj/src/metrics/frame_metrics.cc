#include "sqpsim/metrics/frame_metrics.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "sqpsim/sim/check.h"

namespace sqpsim::metrics {

namespace {
// Fractional F(t) values accumulate rounding error; a byte boundary within
// this distance counts as reached.
constexpr double kByteEpsilon = 1e-6;
}  // namespace

double WindowedFrameSize(double s_window, double s_slot, double pending,
                         int n) {
  SQPSIM_CHECK(n >= 1, "smoothing window must be at least one frame");
  return std::max({(s_window - pending) / n, s_slot - pending, 0.0});
}

std::vector<SyntheticFrame> RetrofitFrames(const FlowTimeline& flow,
                                           SimTime origin, SimTime end,
                                           SimTime interval, int n) {
  SQPSIM_CHECK(interval > SimTime::Zero(), "frame interval must be positive");
  std::vector<SyntheticFrame> frames;
  double assigned = 0;
  for (int64_t k = 0;; ++k) {
    const SimTime t = origin + interval * k;
    if (t + interval * n > end) break;
    const double sent = static_cast<double>(flow.IngressBytes(origin, t));
    const double pending = std::max(0.0, assigned - sent);
    const double s_window =
        static_cast<double>(flow.IngressBytes(t, t + interval * n));
    const double s_slot =
        static_cast<double>(flow.IngressBytes(t, t + interval));
    SyntheticFrame f;
    f.index = k;
    f.slot_start = t;
    f.pending = pending;
    f.size = WindowedFrameSize(s_window, s_slot, pending, n);
    assigned += f.size;
    f.cumulative_end = assigned;
    frames.push_back(f);
  }
  return frames;
}

std::vector<FrameDelay> SimulatedFrameDelays(
    const FlowTimeline& flow, std::span<const SyntheticFrame> frames,
    SimTime origin, SimTime interval, SimTime owd_fwd) {
  const auto pkts = flow.packets();
  const size_t first = flow.FirstAtOrAfter(origin);
  const double base =
      first == 0 ? 0.0 : static_cast<double>(flow.CumulativeThrough(first - 1));
  std::vector<FrameDelay> out;
  out.reserve(frames.size());
  size_t cursor = first;
  for (const auto& f : frames) {
    FrameDelay d;
    d.index = f.index;
    d.created_at = f.slot_start - owd_fwd;
    if (f.size <= kByteEpsilon) {
      d.zero_size = true;
      d.delay = interval;
      out.push_back(d);
      continue;
    }
    const double target = base + f.cumulative_end - kByteEpsilon;
    while (cursor < pkts.size() &&
           static_cast<double>(flow.CumulativeThrough(cursor)) < target) {
      ++cursor;
    }
    if (cursor >= pkts.size()) break;
    d.last_byte_ingress = pkts[cursor].ingress;
    size_t carrier = cursor;
    while (carrier < pkts.size() &&
           (pkts[carrier].dropped || !pkts[carrier].dequeued)) {
      ++carrier;
    }
    if (carrier >= pkts.size()) continue;
    d.delivered_at = pkts[carrier].dequeued;
    d.delay = *d.delivered_at - d.created_at;
    out.push_back(d);
  }
  return out;
}

std::vector<FrameRttSample> FrameRtts(const FlowTimeline& flow,
                                      SimTime owd_fwd) {
  struct Acc {
    SimTime first_ingress = SimTime::Max();
    std::optional<SimTime> last_ack;
    bool incomplete = false;
  };
  std::map<FrameId, Acc> acc;
  for (const auto& p : flow.packets()) {
    if (!p.frame_id) continue;
    auto& a = acc[*p.frame_id];
    a.first_ingress = std::min(a.first_ingress, p.ingress);
    if (p.acked) {
      a.last_ack = a.last_ack ? std::max(*a.last_ack, *p.acked) : *p.acked;
    } else {
      a.incomplete = true;
    }
  }
  std::vector<FrameRttSample> out;
  for (const auto& [id, a] : acc) {
    if (!a.last_ack) continue;
    FrameRttSample s;
    s.frame_id = id;
    s.first_send = a.first_ingress - owd_fwd;
    s.last_ack = *a.last_ack;
    s.rtt = s.last_ack - s.first_send;
    s.incomplete = a.incomplete;
    out.push_back(s);
  }
  return out;
}

std::optional<double> Percentile(std::vector<double> values, double p) {
  if (values.empty()) return std::nullopt;
  SQPSIM_CHECK(p >= 0 && p <= 100, "percentile out of range");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<size_t>(std::ceil(p * n / 100.0 - 1e-9));
  if (rank == 0) rank = 1;
  return values[rank - 1];
}

}  // namespace sqpsim::metrics
