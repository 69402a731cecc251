#ifndef SQPSIM_METRICS_SUMMARY_H_
#define SQPSIM_METRICS_SUMMARY_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqpsim/sim/packet.h"
#include "sqpsim/sim/trace.h"
#include "sqpsim/sim/units.h"

namespace sqpsim::metrics {

struct MetricsConfig {
  SimTime frame_interval = SimTime::Micros(16667);
  int smoothing_frames = 4;
  SimTime fairness_window = SimTime::Millis(500);
  std::vector<double> percentiles{10, 50, 90};
  // Link capacity for utilization; nullopt leaves utilization unreported.
  std::optional<BitsPerSecond> capacity_bps;
  // On a fixed-rate link a packet's own serialization is not queuing.
  bool subtract_serialization = true;
  SimTime owd_fwd = SimTime::Millis(20);
  // Analysis window; `end` defaults to the last trace event.
  SimTime start = SimTime::Zero();
  std::optional<SimTime> end;

  std::optional<std::string> Validate() const;
};

struct PercentileValue {
  double p = 0;
  double value = 0;
};

struct TimePoint {
  SimTime at;
  double value = 0;
};

struct FlowReport {
  FlowId flow_id = 0;
  ByteCount delivered_bytes = 0;
  ByteCount ingress_bytes = 0;
  int64_t packets_offered = 0;
  int64_t packets_dropped = 0;
  double throughput_bps = 0;
  std::optional<double> utilization;
  double loss_rate = 0;
  std::vector<PercentileValue> window_throughput_bps;
  std::vector<PercentileValue> queue_delay_us;
  std::vector<PercentileValue> frame_bitrate_bps;  // from F(t)
  std::optional<double> frame_delay_p90_us;        // retrofitted frames
  std::optional<double> frame_rtt_p90_us;          // flows with frame ids

  std::vector<TimePoint> throughput_series;
  std::vector<TimePoint> frame_bitrate_series;
  std::vector<TimePoint> frame_delay_series;
};

struct Report {
  SimTime start;
  SimTime end;
  std::vector<FlowReport> flows;
  ByteCount delivered_bytes = 0;
  double throughput_bps = 0;
  std::optional<double> utilization;
  double loss_rate = 0;
  std::vector<PercentileValue> queue_delay_us;
  std::vector<TimePoint> jain_series;
  std::optional<double> jain_min;
  std::optional<double> jain_mean;

  const FlowReport* Flow(FlowId id) const;
};

// Per-packet queuing delays of packets dequeued in [from, to), all flows
// when `flow` is nullopt.
std::vector<double> QueuingDelaysUs(std::span<const TraceEvent> events,
                                    const MetricsConfig& cfg,
                                    std::optional<FlowId> flow, SimTime from,
                                    SimTime to);

// Jain index over per-flow delivered rate in consecutive windows of
// `window` starting at `from`. Only flows that offered traffic in a window
// take part in it.
std::vector<TimePoint> JainSeries(std::span<const TraceEvent> events,
                                  SimTime from, SimTime to, SimTime window);

Report Summarize(std::span<const TraceEvent> events, const MetricsConfig& cfg);

// One row per flow per metric; aggregate rows use flow_id "all".
inline constexpr std::string_view kReportCsvHeader = "flow_id,metric,value";
struct ReportRow {
  std::string flow;
  std::string metric;
  double value = 0;
};
std::vector<ReportRow> ReportRows(const Report& report);
void WriteReportCsv(std::ostream& out, const std::vector<ReportRow>& rows);
// key=value lines, e.g. flow.1.throughput_bps=...
void WriteSummary(std::ostream& out, const std::vector<ReportRow>& rows);

inline constexpr std::string_view kTimeseriesCsvHeader =
    "series,flow_id,time_us,value";
void WriteTimeseriesCsv(std::ostream& out, const Report& report);

}  // namespace sqpsim::metrics

#endif  // SQPSIM_METRICS_SUMMARY_H_
