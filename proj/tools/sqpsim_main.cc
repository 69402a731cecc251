// sqpsim: run scenarios, sweeps, trace analysis and the two-flow vector
// field from the command line. Set SQPSIM_LOG=trace|debug|info|warn|error|off
// to control log verbosity (default info).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "sqpsim/analysis/vector_field.h"
#include "sqpsim/metrics/summary.h"
#include "sqpsim/scenario/runner.h"
#include "sqpsim/scenario/scenario.h"
#include "sqpsim/sim/errors.h"
#include "sqpsim/sim/text.h"

namespace {

using namespace sqpsim;

void ConfigureLogging() {
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("SQPSIM_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

std::filesystem::path OutputDir(const scenario::Scenario& sc,
                                const std::string& flag) {
  if (!flag.empty()) return flag;
  if (sc.output_dir) return *sc.output_dir;
  return std::filesystem::path("out") / sc.name;
}

int Run(const std::string& file, const std::string& out_flag) {
  const auto sc = scenario::LoadScenario(file);
  const auto out = OutputDir(sc, out_flag);
  spdlog::info("running {} ({} flows, {:.1f} s)", sc.name, sc.flows.size(),
               sc.duration.seconds());
  const auto result = scenario::RunScenario(sc);
  spdlog::debug("{} events processed, {} trace records",
                result.events_processed, result.trace.size());
  scenario::WriteArtifacts(result, out);
  for (const auto& row : result.rows) {
    if (row.metric == "throughput_bps" || row.metric == "utilization" ||
        row.metric == "estimate_mean_bps") {
      spdlog::info("{} {} = {}", row.flow, row.metric,
                   text::FormatDouble(row.value));
    }
  }
  spdlog::info("artifacts written to {}", out.string());
  return 0;
}

int Sweep(const std::string& file, const std::string& axis_name,
          const std::vector<double>& values, const std::string& out_flag,
          unsigned jobs) {
  const auto axis = scenario::ParseSweepAxis(axis_name);
  if (!axis) {
    spdlog::error("unknown axis '{}' (expected T, m, owd_multiplier, buffer, "
                  "n_flows or cross_rate)",
                  axis_name);
    return 2;
  }
  const auto sc = scenario::LoadScenario(file);
  const auto out = OutputDir(sc, out_flag);
  spdlog::info("sweeping {} over {} values with {} jobs", axis_name,
               values.size(), jobs);
  scenario::RunSweep(sc, *axis, values, out, jobs);
  spdlog::info("combined results in {}", (out / "sweep.csv").string());
  return 0;
}

int Analyze(const std::string& trace_path, const std::string& config_path,
            const std::string& out_flag) {
  const auto cfg = scenario::LoadMetricsConfig(config_path);
  std::ifstream in(trace_path);
  if (!in) throw ConfigError("cannot open trace: " + trace_path);
  const auto events = ReadTraceCsv(in, trace_path);
  const auto report = metrics::Summarize(events, cfg);
  const auto rows = metrics::ReportRows(report);
  if (out_flag.empty()) {
    metrics::WriteReportCsv(std::cout, rows);
    return 0;
  }
  const std::filesystem::path out(out_flag);
  std::filesystem::create_directories(out);
  scenario::WriteFileAtomically(out / "report.csv", [&](std::ostream& o) {
    metrics::WriteReportCsv(o, rows);
  });
  scenario::WriteFileAtomically(out / "summary.txt", [&](std::ostream& o) {
    metrics::WriteSummary(o, rows);
  });
  scenario::WriteFileAtomically(out / "timeseries.csv", [&](std::ostream& o) {
    metrics::WriteTimeseriesCsv(o, report);
  });
  spdlog::info("analysis written to {}", out.string());
  return 0;
}

int Field(const analysis::FieldParams& params, const std::string& out_flag) {
  const auto field = analysis::UpdateStepField(params);
  if (out_flag.empty()) {
    analysis::WriteFieldCsv(std::cout, field);
  } else {
    scenario::WriteFileAtomically(out_flag, [&](std::ostream& o) {
      analysis::WriteFieldCsv(o, field);
    });
  }
  for (const auto& cell : analysis::RuleFieldEquilibria(field, params.grid)) {
    spdlog::info("rule-field equilibrium near B1={:.3f} Mbps, B2={:.3f} Mbps",
                 field[static_cast<size_t>(cell.i) * params.grid + cell.j].b1 / 1e6,
                 field[static_cast<size_t>(cell.i) * params.grid + cell.j].b2 / 1e6);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();
  CLI::App app{"Packet-level simulator for paced video congestion control"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string out;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario_file, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a parameter axis");
  std::string axis;
  std::vector<double> values;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  sweep->add_option("scenario", scenario_file, "Base scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--axis", axis,
                    "T, m, owd_multiplier, buffer, n_flows or cross_rate")
      ->required();
  sweep->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out, "Output directory");
  sweep->add_option("--jobs", jobs, "Scenarios run in parallel")
      ->check(CLI::PositiveNumber);

  auto* analyze = app.add_subcommand("analyze", "Compute metrics from a trace");
  std::string trace_file;
  std::string config_file;
  analyze->add_option("trace", trace_file, "trace.csv")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--config", config_file,
                      "File with a [metrics] section (a scenario file works)")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--out", out, "Output directory (default: stdout)");

  auto* field = app.add_subcommand("field", "Two-flow update-step vector field");
  analysis::FieldParams fp;
  double c_mbps = 20;
  double delta_kbps = 320;
  field->add_option("--C", c_mbps, "Link capacity in Mbps")->required();
  field->add_option("--m", fp.m, "Pacing multiplier")->required();
  field->add_option("--T", fp.t, "Target multiplier")->required();
  field->add_option("--delta", delta_kbps, "Step size in kbps");
  field->add_option("--r", fp.reward_weight, "Reward weight");
  field->add_option("--grid", fp.grid, "Grid points per axis");
  field->add_option("--out", out, "Output CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return Run(scenario_file, out);
    if (*sweep) return Sweep(scenario_file, axis, values, out, jobs);
    if (*analyze) return Analyze(trace_file, config_file, out);
    if (*field) {
      if (!(c_mbps > 0) || !(fp.m > 1) || !(fp.t > 0 && fp.t < 1) ||
          fp.grid < 2) {
        spdlog::error("field needs C > 0, m > 1, 0 < T < 1 and grid >= 2");
        return 2;
      }
      fp.capacity = c_mbps * 1e6;
      fp.step_bps = delta_kbps * 1e3;
      return Field(fp, out);
    }
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
