#include "sqpsim/scenario/runner.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "sqpsim/analysis/steady_state.h"
#include "sqpsim/metrics/frame_metrics.h"
#include "sqpsim/sim/errors.h"
#include "sqpsim/sim/event_loop.h"
#include "sqpsim/sim/network.h"
#include "sqpsim/sim/random.h"
#include "sqpsim/sim/text.h"

namespace sqpsim::scenario {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// Adds what only the SQP sender knows (encoder and estimator state, native
// frame delays) and, when the scenario matches one of the closed-form
// models, the model's prediction.
void AppendSqpRows(const Scenario& sc, const std::vector<SqpFlowResult>& sqp,
                   std::vector<metrics::ReportRow>& rows) {
  const SimTime from = sc.metrics.start;
  const SimTime to = sc.metrics.end.value_or(sc.duration);

  BitsPerSecond inelastic = 0;
  bool other_cross = false;
  std::vector<const sqp::SqpFlowConfig*> configs;
  for (const auto& fl : sc.flows) {
    if (const auto* q = std::get_if<sqp::SqpFlowConfig>(&fl)) {
      configs.push_back(q);
    } else if (const auto* c = std::get_if<cross::InelasticConfig>(&fl)) {
      inelastic += c->rate_bps;
    } else {
      other_cross = true;
    }
  }
  const int n = static_cast<int>(sqp.size());
  const bool fixed = !sc.link.trace_driven();
  const BitsPerSecond capacity = sc.link.CapacityBps();

  for (size_t i = 0; i < sqp.size(); ++i) {
    const auto& r = sqp[i];
    const auto& cfg = *configs[i];
    const std::string id = std::to_string(r.flow_id);
    auto add = [&](std::string metric, double v) {
      rows.push_back({id, std::move(metric), v});
    };

    double target_sum = 0;
    int target_n = 0;
    std::vector<double> delays;
    for (const auto& [fid, fs] : r.frames) {
      if (fs.created_at < from || fs.created_at >= to) continue;
      target_sum += fs.encoder_target;
      ++target_n;
      if (auto d = fs.delay()) delays.push_back(static_cast<double>(d->us()));
    }
    if (target_n > 0) add("encoder_bitrate_mean_bps", target_sum / target_n);
    double est_sum = 0;
    int est_n = 0;
    for (const auto& e : r.frame_log) {
      if (e.completed_at < from || e.completed_at >= to) continue;
      est_sum += e.estimate;
      ++est_n;
    }
    if (est_n > 0) add("estimate_mean_bps", est_sum / est_n);
    if (auto p = metrics::Percentile(delays, 90)) {
      add("native_frame_delay_p90_us", *p);
    }

    if (!fixed || other_cross) continue;
    const double t = cfg.params.target_multiplier;
    const double m = cfg.params.pacing_multiplier;
    if (n == 1) {
      if (auto b = analysis::SteadyStateEstimate(capacity, t, inelastic, m)) {
        add("predicted_estimate_bps", *b);
        add("predicted_utilization",
            analysis::UtilizationOfAvailable(m, t, 1.0 - inelastic / capacity));
      }
    } else if (inelastic == 0) {
      add("predicted_estimate_bps",
          analysis::SymmetricFlowEstimate(capacity, t, m, n));
      add("predicted_total_utilization",
          analysis::PredictedTotalUtilization(t, m, n));
    }
  }
}

}  // namespace

RunResult RunScenario(const Scenario& sc) {
  if (sc.flows.empty()) throw ConfigError("scenario has no flows");
  EventLoop loop;
  TraceRecorder trace;
  Network net(loop, sc.link, &trace);

  std::vector<std::unique_ptr<TrafficFlow>> flows;
  std::vector<sqp::SqpSender*> senders;
  FlowId next_id = 1;
  for (const auto& spec : sc.flows) {
    const FlowId id = next_id++;
    SplitMix64 rng = SplitMix64(sc.seed).Fork(static_cast<uint64_t>(id));
    std::visit(
        Overloaded{
            [&](const sqp::SqpFlowConfig& c) {
              auto s = std::make_unique<sqp::SqpSender>(id, net, c, rng);
              senders.push_back(s.get());
              flows.push_back(std::move(s));
            },
            [&](const cross::InelasticConfig& c) {
              flows.push_back(std::make_unique<cross::InelasticFlow>(id, net, c));
            },
            [&](const cross::IdealElasticConfig& c) {
              flows.push_back(
                  std::make_unique<cross::IdealElasticFlow>(id, net, c));
            },
            [&](const cross::AimdConfig& c) {
              flows.push_back(std::make_unique<cross::AimdFlow>(id, net, c));
            }},
        spec);
  }
  for (auto& f : flows) net.Attach(f.get());
  for (auto& f : flows) f->Start();
  loop.RunUntil(sc.duration);

  RunResult result;
  result.events_processed = loop.Processed();
  for (auto* s : senders) {
    result.sqp_flows.push_back({s->id(), s->frame_log(), s->frames()});
  }
  result.trace = trace.Take();
  result.report = metrics::Summarize(result.trace, sc.metrics);
  result.rows = metrics::ReportRows(result.report);
  AppendSqpRows(sc, result.sqp_flows, result.rows);
  return result;
}

void WriteFileAtomically(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    contents(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void WriteArtifacts(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteFileAtomically(dir / "trace.csv", [&](std::ostream& o) {
    WriteTraceCsv(o, result.trace);
  });
  for (const auto& f : result.sqp_flows) {
    WriteFileAtomically(
        dir / ("frames_" + std::to_string(f.flow_id) + ".csv"),
        [&](std::ostream& o) { sqp::WriteFrameLogCsv(o, f.frame_log); });
  }
  WriteFileAtomically(dir / "report.csv", [&](std::ostream& o) {
    metrics::WriteReportCsv(o, result.rows);
  });
  WriteFileAtomically(dir / "summary.txt", [&](std::ostream& o) {
    metrics::WriteSummary(o, result.rows);
  });
  WriteFileAtomically(dir / "timeseries.csv", [&](std::ostream& o) {
    metrics::WriteTimeseriesCsv(o, result.report);
  });
}

std::vector<SweepPoint> RunSweep(const Scenario& base, SweepAxis axis,
                                 const std::vector<double>& values,
                                 const std::filesystem::path& out,
                                 unsigned jobs) {
  // Validate every point before spending time on any of them.
  std::vector<Scenario> scenarios;
  for (double v : values) scenarios.push_back(ApplySweepValue(base, axis, v));

  std::vector<SweepPoint> points(values.size());
  std::atomic<size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        auto r = RunScenario(scenarios[i]);
        const std::string label = std::string(ToString(axis)) + "_" +
                                  text::FormatDouble(values[i]);
        WriteArtifacts(r, out / label);
        points[i] = {values[i], std::move(r.rows)};
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(values.size())));
  std::vector<std::thread> threads;
  for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  std::filesystem::create_directories(out);
  WriteFileAtomically(out / "sweep.csv", [&](std::ostream& o) {
    o << kSweepCsvHeader << '\n';
    for (const auto& p : points) {
      for (const auto& row : p.rows) {
        o << ToString(axis) << ',' << text::FormatDouble(p.value) << ','
          << row.flow << ',' << row.metric << ','
          << text::FormatDouble(row.value) << '\n';
      }
    }
  });
  return points;
}

}  // namespace sqpsim::scenario
