#include "sqpsim/metrics/summary.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "sqpsim/analysis/steady_state.h"
#include "sqpsim/metrics/frame_metrics.h"
#include "sqpsim/metrics/timeline.h"
#include "sqpsim/sim/text.h"

namespace sqpsim::metrics {

std::optional<std::string> MetricsConfig::Validate() const {
  if (frame_interval <= SimTime::Zero()) return "frame_interval must be > 0";
  if (smoothing_frames < 1) return "smoothing_frames must be >= 1";
  if (fairness_window <= SimTime::Zero()) return "fairness_window must be > 0";
  for (double p : percentiles) {
    if (!(p >= 0 && p <= 100)) return "percentiles must lie in [0, 100]";
  }
  if (capacity_bps && !(*capacity_bps > 0)) return "capacity must be > 0";
  if (end && *end <= start) return "analysis end must follow start";
  return std::nullopt;
}

const FlowReport* Report::Flow(FlowId id) const {
  for (const auto& f : flows) {
    if (f.flow_id == id) return &f;
  }
  return nullptr;
}

std::vector<double> QueuingDelaysUs(std::span<const TraceEvent> events,
                                    const MetricsConfig& cfg,
                                    std::optional<FlowId> flow, SimTime from,
                                    SimTime to) {
  const bool subtract = cfg.subtract_serialization && cfg.capacity_bps;
  const auto capacity =
      subtract ? static_cast<int64_t>(std::llround(*cfg.capacity_bps)) : 0;
  std::unordered_map<PacketId, SimTime> enqueued;
  std::vector<double> out;
  for (const auto& ev : events) {
    if (flow && ev.flow_id != *flow) continue;
    if (ev.kind == TraceEventKind::kEnqueue) {
      enqueued[ev.packet_id] = ev.at;
    } else if (ev.kind == TraceEventKind::kDequeue) {
      auto it = enqueued.find(ev.packet_id);
      if (it == enqueued.end()) continue;
      if (ev.at >= from && ev.at < to) {
        SimTime d = ev.at - it->second;
        if (subtract) d -= SerializationTime(ev.size, capacity);
        out.push_back(static_cast<double>(std::max<int64_t>(0, d.us())));
      }
      enqueued.erase(it);
    }
  }
  return out;
}

namespace {

std::vector<PercentileValue> Percentiles(const std::vector<double>& values,
                                         const std::vector<double>& ps) {
  std::vector<PercentileValue> out;
  if (values.empty()) return out;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  for (double p : ps) {
    // Percentile() sorts its copy; a sorted input keeps that cheap.
    out.push_back({p, *Percentile(sorted, p)});
  }
  return out;
}

struct WindowBytes {
  std::vector<ByteCount> offered;
  std::vector<ByteCount> delivered;
};

std::map<FlowId, WindowBytes> BytesPerWindow(
    const std::map<FlowId, FlowTimeline>& timelines, SimTime from, SimTime to,
    SimTime window) {
  const int64_t n = (to - from).us() / window.us();
  std::map<FlowId, WindowBytes> out;
  auto slot = [&](SimTime t) -> std::optional<int64_t> {
    if (t < from) return std::nullopt;
    const int64_t k = (t - from).us() / window.us();
    if (k >= n) return std::nullopt;
    return k;
  };
  for (const auto& [id, tl] : timelines) {
    auto& w = out[id];
    w.offered.assign(static_cast<size_t>(n), 0);
    w.delivered.assign(static_cast<size_t>(n), 0);
    for (const auto& p : tl.packets()) {
      if (auto k = slot(p.ingress)) w.offered[*k] += p.size;
      if (p.dequeued) {
        if (auto k = slot(*p.dequeued)) w.delivered[*k] += p.size;
      }
    }
  }
  return out;
}

std::vector<TimePoint> JainFromWindows(
    const std::map<FlowId, WindowBytes>& windows, SimTime from,
    SimTime window) {
  std::vector<TimePoint> out;
  if (windows.empty()) return out;
  const size_t n = windows.begin()->second.offered.size();
  for (size_t k = 0; k < n; ++k) {
    std::vector<double> rates;
    for (const auto& [id, w] : windows) {
      if (w.offered[k] > 0) rates.push_back(static_cast<double>(w.delivered[k]));
    }
    if (auto j = analysis::JainIndex(rates)) {
      out.push_back({from + window * static_cast<int64_t>(k), *j});
    }
  }
  return out;
}

SimTime LastEventTime(std::span<const TraceEvent> events) {
  SimTime last = SimTime::Zero();
  for (const auto& ev : events) last = std::max(last, ev.at);
  return last;
}

}  // namespace

std::vector<TimePoint> JainSeries(std::span<const TraceEvent> events,
                                  SimTime from, SimTime to, SimTime window) {
  const auto timelines = BuildTimelines(events);
  return JainFromWindows(BytesPerWindow(timelines, from, to, window), from,
                         window);
}

Report Summarize(std::span<const TraceEvent> events,
                 const MetricsConfig& cfg) {
  Report report;
  report.start = cfg.start;
  report.end = cfg.end.value_or(LastEventTime(events));
  if (report.end <= report.start) report.end = report.start;
  const SimTime span = report.end - report.start;
  const bool has_span = span > SimTime::Zero();

  const auto timelines = BuildTimelines(events);
  const auto windows =
      BytesPerWindow(timelines, report.start, report.end, cfg.fairness_window);

  int64_t offered_all = 0;
  int64_t dropped_all = 0;
  for (const auto& [id, tl] : timelines) {
    FlowReport fr;
    fr.flow_id = id;
    for (const auto& p : tl.packets()) {
      if (p.ingress >= report.start && p.ingress < report.end) {
        ++fr.packets_offered;
        fr.ingress_bytes += p.size;
        if (p.dropped) ++fr.packets_dropped;
      }
      if (p.dequeued && *p.dequeued >= report.start &&
          *p.dequeued < report.end) {
        fr.delivered_bytes += p.size;
      }
    }
    fr.throughput_bps = has_span ? RateOver(fr.delivered_bytes, span) : 0.0;
    if (cfg.capacity_bps) fr.utilization = fr.throughput_bps / *cfg.capacity_bps;
    fr.loss_rate = fr.packets_offered > 0
                       ? static_cast<double>(fr.packets_dropped) /
                             static_cast<double>(fr.packets_offered)
                       : 0.0;
    offered_all += fr.packets_offered;
    dropped_all += fr.packets_dropped;

    const auto& w = windows.at(id);
    std::vector<double> window_rates;
    for (size_t k = 0; k < w.delivered.size(); ++k) {
      const double r = RateOver(w.delivered[k], cfg.fairness_window);
      window_rates.push_back(r);
      fr.throughput_series.push_back(
          {report.start + cfg.fairness_window * static_cast<int64_t>(k), r});
    }
    fr.window_throughput_bps = Percentiles(window_rates, cfg.percentiles);
    fr.queue_delay_us = Percentiles(
        QueuingDelaysUs(events, cfg, id, report.start, report.end),
        cfg.percentiles);

    const auto frames =
        RetrofitFrames(tl, report.start, report.end, cfg.frame_interval,
                       cfg.smoothing_frames);
    std::vector<double> bitrates;
    for (const auto& f : frames) {
      const double bps = f.size * 8.0 / cfg.frame_interval.seconds();
      bitrates.push_back(bps);
      fr.frame_bitrate_series.push_back({f.slot_start, bps});
    }
    fr.frame_bitrate_bps = Percentiles(bitrates, cfg.percentiles);
    std::vector<double> delays;
    for (const auto& d : SimulatedFrameDelays(tl, frames, report.start,
                                              cfg.frame_interval,
                                              cfg.owd_fwd)) {
      delays.push_back(static_cast<double>(d.delay.us()));
      fr.frame_delay_series.push_back(
          {d.created_at, static_cast<double>(d.delay.us())});
    }
    fr.frame_delay_p90_us = Percentile(delays, 90);
    std::vector<double> rtts;
    for (const auto& s : FrameRtts(tl, cfg.owd_fwd)) {
      if (s.first_send + cfg.owd_fwd >= report.start &&
          s.first_send + cfg.owd_fwd < report.end) {
        rtts.push_back(static_cast<double>(s.rtt.us()));
      }
    }
    fr.frame_rtt_p90_us = Percentile(rtts, 90);

    report.delivered_bytes += fr.delivered_bytes;
    report.flows.push_back(std::move(fr));
  }
  report.throughput_bps =
      has_span ? RateOver(report.delivered_bytes, span) : 0.0;
  if (cfg.capacity_bps) {
    report.utilization = report.throughput_bps / *cfg.capacity_bps;
  }
  report.loss_rate = offered_all > 0 ? static_cast<double>(dropped_all) /
                                           static_cast<double>(offered_all)
                                     : 0.0;
  report.queue_delay_us = Percentiles(
      QueuingDelaysUs(events, cfg, std::nullopt, report.start, report.end),
      cfg.percentiles);
  report.jain_series =
      JainFromWindows(windows, report.start, cfg.fairness_window);
  if (!report.jain_series.empty()) {
    double lo = 1.0;
    double sum = 0;
    for (const auto& p : report.jain_series) {
      lo = std::min(lo, p.value);
      sum += p.value;
    }
    report.jain_min = lo;
    report.jain_mean = sum / static_cast<double>(report.jain_series.size());
  }
  return report;
}

namespace {

std::string PctName(std::string_view stem, double p, std::string_view unit) {
  return std::string(stem) + "_p" + text::FormatDouble(p) + "_" +
         std::string(unit);
}

void AppendFlowRows(const FlowReport& f, std::vector<ReportRow>& rows) {
  const std::string id = std::to_string(f.flow_id);
  auto add = [&](std::string metric, double v) {
    rows.push_back({id, std::move(metric), v});
  };
  add("delivered_bytes", static_cast<double>(f.delivered_bytes));
  add("ingress_bytes", static_cast<double>(f.ingress_bytes));
  add("packets_offered", static_cast<double>(f.packets_offered));
  add("packets_dropped", static_cast<double>(f.packets_dropped));
  add("throughput_bps", f.throughput_bps);
  if (f.utilization) add("utilization", *f.utilization);
  add("loss_rate", f.loss_rate);
  for (const auto& p : f.window_throughput_bps) {
    add(PctName("throughput", p.p, "bps"), p.value);
  }
  for (const auto& p : f.queue_delay_us) {
    add(PctName("queue_delay", p.p, "us"), p.value);
  }
  for (const auto& p : f.frame_bitrate_bps) {
    add(PctName("frame_bitrate", p.p, "bps"), p.value);
  }
  if (f.frame_delay_p90_us) add("frame_delay_p90_us", *f.frame_delay_p90_us);
  if (f.frame_rtt_p90_us) add("frame_rtt_p90_us", *f.frame_rtt_p90_us);
}

}  // namespace

std::vector<ReportRow> ReportRows(const Report& report) {
  std::vector<ReportRow> rows;
  for (const auto& f : report.flows) AppendFlowRows(f, rows);
  auto add = [&](std::string metric, double v) {
    rows.push_back({"all", std::move(metric), v});
  };
  add("duration_s", (report.end - report.start).seconds());
  add("delivered_bytes", static_cast<double>(report.delivered_bytes));
  add("throughput_bps", report.throughput_bps);
  if (report.utilization) add("utilization", *report.utilization);
  add("loss_rate", report.loss_rate);
  for (const auto& p : report.queue_delay_us) {
    add(PctName("queue_delay", p.p, "us"), p.value);
  }
  if (report.jain_min) add("jain_min", *report.jain_min);
  if (report.jain_mean) add("jain_mean", *report.jain_mean);
  return rows;
}

void WriteReportCsv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kReportCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.flow << ',' << r.metric << ',' << text::FormatDouble(r.value)
        << '\n';
  }
}

void WriteSummary(std::ostream& out, const std::vector<ReportRow>& rows) {
  for (const auto& r : rows) {
    if (r.flow == "all") {
      out << "all.";
    } else {
      out << "flow." << r.flow << '.';
    }
    out << r.metric << '=' << text::FormatDouble(r.value) << '\n';
  }
}

void WriteTimeseriesCsv(std::ostream& out, const Report& report) {
  out << kTimeseriesCsvHeader << '\n';
  auto emit = [&](std::string_view series, const std::string& flow,
                  const std::vector<TimePoint>& points) {
    for (const auto& p : points) {
      out << series << ',' << flow << ',' << p.at.us() << ','
          << text::FormatDouble(p.value) << '\n';
    }
  };
  for (const auto& f : report.flows) {
    const std::string id = std::to_string(f.flow_id);
    emit("throughput_bps", id, f.throughput_series);
    emit("frame_bitrate_bps", id, f.frame_bitrate_series);
    emit("frame_delay_us", id, f.frame_delay_series);
  }
  emit("jain", "all", report.jain_series);
}

}  // namespace sqpsim::metrics
