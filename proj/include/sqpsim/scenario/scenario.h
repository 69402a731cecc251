#ifndef SQPSIM_SCENARIO_SCENARIO_H_
#define SQPSIM_SCENARIO_SCENARIO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqpsim/cross/aimd_flow.h"
#include "sqpsim/cross/ideal_elastic_flow.h"
#include "sqpsim/cross/inelastic_flow.h"
#include "sqpsim/metrics/summary.h"
#include "sqpsim/sim/link.h"
#include "sqpsim/sqp/sqp_sender.h"

namespace sqpsim::scenario {

using FlowSpec = std::variant<sqp::SqpFlowConfig, cross::InelasticConfig,
                              cross::IdealElasticConfig, cross::AimdConfig>;

struct Scenario {
  std::string name = "scenario";
  uint64_t seed = 1;
  SimTime duration = SimTime::Seconds(60);
  LinkConfig link;
  // Where a trace-driven link came from, for messages only.
  std::optional<std::filesystem::path> link_trace_path;
  // Flows get ids 1, 2, ... in this order.
  std::vector<FlowSpec> flows;
  metrics::MetricsConfig metrics;
  std::optional<std::filesystem::path> output_dir;
};

// Queue size used when a scenario gives neither buffer_packets nor
// buffer_ms.
inline constexpr double kDefaultBufferPacketsPerMbps = 10.0;

// Parses the sectioned key = value format. Relative trace paths resolve
// against `base_dir`. Throws ConfigError naming the source, line and field.
Scenario ParseScenario(std::istream& in, const std::string& source_name,
                       const std::filesystem::path& base_dir);
Scenario LoadScenario(const std::filesystem::path& path);

// Reads only [metrics] and [link] (for capacity and forward delay), as the
// analyze command needs. Other sections are ignored.
metrics::MetricsConfig LoadMetricsConfig(const std::filesystem::path& path);

// Parameters a sweep may vary.
enum class SweepAxis { kT, kM, kOwdMultiplier, kBuffer, kNFlows, kCrossRate };
std::optional<SweepAxis> ParseSweepAxis(std::string_view name);
std::string_view ToString(SweepAxis axis);

// Copy of `base` with one parameter replaced. n_flows sets the number of
// SQP flows by replicating the first one; cross_rate (Mbps) sets every
// inelastic flow's rate; buffer is in packets.
Scenario ApplySweepValue(const Scenario& base, SweepAxis axis, double value);

}  // namespace sqpsim::scenario

#endif  // SQPSIM_SCENARIO_SCENARIO_H_
