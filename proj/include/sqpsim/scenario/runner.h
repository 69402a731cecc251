#ifndef SQPSIM_SCENARIO_RUNNER_H_
#define SQPSIM_SCENARIO_RUNNER_H_

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sqpsim/metrics/summary.h"
#include "sqpsim/scenario/scenario.h"

namespace sqpsim::scenario {

// What an SQP flow logged about itself during a run.
struct SqpFlowResult {
  FlowId flow_id = 0;
  std::vector<sqp::FrameLogEntry> frame_log;
  std::map<FrameId, sqp::FrameStats> frames;
};

struct RunResult {
  std::vector<TraceEvent> trace;
  std::vector<SqpFlowResult> sqp_flows;
  metrics::Report report;
  // Report rows plus per-SQP-flow native and model-predicted values.
  std::vector<metrics::ReportRow> rows;
  uint64_t events_processed = 0;
};

// Deterministic: the same scenario always yields the same result.
RunResult RunScenario(const Scenario& scenario);

// trace.csv, frames_<flow>.csv per SQP flow, report.csv, summary.txt and
// timeseries.csv. Each file appears atomically.
void WriteArtifacts(const RunResult& result, const std::filesystem::path& dir);

// Writes `contents` to a temporary sibling, then renames it into place.
void WriteFileAtomically(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& contents);

inline constexpr std::string_view kSweepCsvHeader =
    "axis,axis_value,flow_id,metric,value";

struct SweepPoint {
  double value = 0;
  std::vector<metrics::ReportRow> rows;
};

// Runs every value (up to `jobs` at a time), writes each artifact set under
// out/<axis>_<value>/ and the combined CSV as out/sweep.csv. Points are
// returned in the order of `values` regardless of scheduling.
std::vector<SweepPoint> RunSweep(const Scenario& base, SweepAxis axis,
                                 const std::vector<double>& values,
                                 const std::filesystem::path& out,
                                 unsigned jobs);

}  // namespace sqpsim::scenario

#endif  // SQPSIM_SCENARIO_RUNNER_H_
