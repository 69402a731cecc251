#include "sqpsim/scenario/scenario.h"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sqpsim/sim/errors.h"
#include "sqpsim/sim/text.h"

namespace sqpsim::scenario {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

std::string_view StripComment(std::string_view line) {
  for (size_t i = 0; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') &&
        (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::vector<Section> ReadSections(std::istream& in, const std::string& src) {
  std::vector<Section> sections;
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(src + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::Trim(StripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      sections.push_back(
          {std::string(text::Trim(line.substr(1, line.size() - 2))), line_no,
           {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    if (sections.empty()) fail("entry outside of any section");
    const auto key = text::Trim(line.substr(0, eq));
    const auto value = text::Trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key");
    sections.back().entries.push_back(
        {std::string(key), std::string(value), line_no, false});
  }
  return sections;
}

// Typed access to one section's entries with error messages that name the
// field and line. Every entry must be consumed.
class Fields {
 public:
  Fields(Section& s, const std::string& src) : s_(s), src_(src) {}

  [[noreturn]] void Fail(const Entry& e, const std::string& msg) const {
    throw ConfigError(src_ + ":" + std::to_string(e.line) + ": field '" +
                      e.key + "': " + msg);
  }
  [[noreturn]] void FailSection(const std::string& msg) const {
    throw ConfigError(src_ + ":" + std::to_string(s_.line) + ": [" + s_.name +
                      "]: " + msg);
  }

  Entry* Find(std::string_view key) {
    Entry* found = nullptr;
    for (auto& e : s_.entries) {
      if (e.key != key) continue;
      if (found) Fail(e, "given more than once");
      found = &e;
    }
    if (found) found->used = true;
    return found;
  }

  std::vector<Entry*> FindAll(std::string_view key) {
    std::vector<Entry*> out;
    for (auto& e : s_.entries) {
      if (e.key == key) {
        e.used = true;
        out.push_back(&e);
      }
    }
    return out;
  }

  double NumberOf(const Entry& e) const {
    auto v = text::ParseDouble(e.value);
    if (!v || !std::isfinite(*v)) Fail(e, "expected a number, got '" + e.value + "'");
    return *v;
  }

  std::optional<double> Number(std::string_view key) {
    Entry* e = Find(key);
    if (!e) return std::nullopt;
    return NumberOf(*e);
  }

  // Number with a lower bound (exclusive or inclusive).
  std::optional<double> Positive(std::string_view key) {
    Entry* e = Find(key);
    if (!e) return std::nullopt;
    const double v = NumberOf(*e);
    if (!(v > 0)) Fail(*e, "must be > 0");
    return v;
  }
  std::optional<double> NonNegative(std::string_view key) {
    Entry* e = Find(key);
    if (!e) return std::nullopt;
    const double v = NumberOf(*e);
    if (v < 0) Fail(*e, "must be >= 0");
    return v;
  }

  std::optional<int64_t> Integer(std::string_view key) {
    Entry* e = Find(key);
    if (!e) return std::nullopt;
    auto v = text::ParseInt(e->value);
    if (!v) Fail(*e, "expected an integer, got '" + e->value + "'");
    return *v;
  }

  std::optional<bool> Bool(std::string_view key) {
    Entry* e = Find(key);
    if (!e) return std::nullopt;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") return false;
    Fail(*e, "expected true or false");
  }

  std::optional<std::string> String(std::string_view key) {
    Entry* e = Find(key);
    if (!e) return std::nullopt;
    if (e->value.empty()) Fail(*e, "empty value");
    return e->value;
  }

  // Rejects anything not consumed by the typed accessors.
  void Finish() const {
    for (const auto& e : s_.entries) {
      if (!e.used) Fail(e, "unknown field in [" + s_.name + "]");
    }
  }

  const Entry* Located(std::string_view key) const {
    for (const auto& e : s_.entries) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

 private:
  Section& s_;
  const std::string& src_;
};

SimTime SecondsField(std::optional<double> v, SimTime fallback) {
  return v ? SimTime::FromSeconds(*v) : fallback;
}
SimTime MillisField(std::optional<double> v, SimTime fallback) {
  return v ? SimTime::FromSeconds(*v / 1e3) : fallback;
}

void ParseWindow(Fields& f, SimTime& start, SimTime& stop) {
  start = SecondsField(f.NonNegative("start_s"), SimTime::Zero());
  stop = SecondsField(f.Positive("stop_s"), SimTime::Max());
  if (stop <= start) {
    f.Fail(*f.Located("stop_s"), "must be later than start_s");
  }
}

sqp::SqpFlowConfig ParseSqp(Fields& f) {
  sqp::SqpFlowConfig c;
  auto& p = c.params;
  if (auto v = f.Number("m")) p.pacing_multiplier = *v;
  if (auto v = f.Number("T")) p.target_multiplier = *v;
  if (auto v = f.Number("step_kbps")) p.step_bps = *v * 1e3;
  if (auto v = f.Number("reward")) p.reward_weight = *v;
  if (auto v = f.Number("owd_multiplier")) p.owd_window_multiplier = *v;
  if (auto v = f.Number("initial_mbps")) p.initial_bps = *v * 1e6;
  if (auto v = f.Bool("undershoot_correction")) p.undershoot_correction = *v;
  if (auto v = f.Number("hysteresis_up")) c.hysteresis_up = *v;
  if (auto v = f.Number("hysteresis_down")) c.hysteresis_down = *v;

  auto& vid = c.video;
  if (auto v = f.Integer("fps")) {
    if (*v <= 0) f.Fail(*f.Located("fps"), "must be > 0");
    vid.fps = static_cast<int>(*v);
  }
  if (auto v = f.Integer("mtu")) vid.mtu = *v;
  vid.jitter = MillisField(f.NonNegative("jitter_ms"), SimTime::Zero());
  if (auto v = f.String("jitter_mode")) {
    if (*v == "one_sided") {
      vid.jitter_mode = video::JitterMode::kOneSided;
    } else if (*v == "symmetric") {
      vid.jitter_mode = video::JitterMode::kSymmetric;
    } else {
      f.Fail(*f.Located("jitter_mode"), "expected one_sided or symmetric");
    }
  }
  // undershoot = start_s:end_s:cap_mbps, repeatable.
  for (Entry* e : f.FindAll("undershoot")) {
    const auto parts = text::Split(e->value, ':');
    std::optional<double> a, b, cap;
    if (parts.size() == 3) {
      a = text::ParseDouble(text::Trim(parts[0]));
      b = text::ParseDouble(text::Trim(parts[1]));
      cap = text::ParseDouble(text::Trim(parts[2]));
    }
    if (!a || !b || !cap) f.Fail(*e, "expected start_s:end_s:cap_mbps");
    vid.undershoot.push_back({SimTime::FromSeconds(*a),
                              SimTime::FromSeconds(*b), *cap * 1e6});
  }
  // overshoot = frame_index:multiplier, repeatable.
  for (Entry* e : f.FindAll("overshoot")) {
    const auto parts = text::Split(e->value, ':');
    std::optional<int64_t> frame;
    std::optional<double> mult;
    if (parts.size() == 2) {
      frame = text::ParseInt(text::Trim(parts[0]));
      mult = text::ParseDouble(text::Trim(parts[1]));
    }
    if (!frame || !mult) f.Fail(*e, "expected frame_index:multiplier");
    vid.overshoot[*frame] = *mult;
  }
  p.floor_bps = vid.FloorBps();
  if (auto v = f.Number("floor_mbps")) p.floor_bps = *v * 1e6;
  ParseWindow(f, c.start, c.stop);

  if (auto err = p.Validate()) f.FailSection(*err);
  if (auto err = vid.Validate()) f.FailSection(*err);
  if (!(c.hysteresis_up >= 0 && c.hysteresis_down >= 0 &&
        c.hysteresis_down < 1)) {
    f.FailSection("hysteresis thresholds must be in [0, 1)");
  }
  return c;
}

cross::InelasticConfig ParseInelastic(Fields& f) {
  cross::InelasticConfig c;
  auto rate = f.Positive("rate_mbps");
  if (!rate) f.FailSection("inelastic flow needs rate_mbps");
  c.rate_bps = *rate * 1e6;
  if (auto v = f.Integer("packet_size")) c.packet_size = *v;
  if (c.packet_size <= 0) f.FailSection("packet_size must be > 0");
  ParseWindow(f, c.start, c.stop);
  return c;
}

cross::IdealElasticConfig ParseIdealElastic(Fields& f) {
  cross::IdealElasticConfig c;
  c.update_period = MillisField(f.Positive("update_ms"), c.update_period);
  if (auto v = f.Positive("initial_mbps")) c.initial_rate_bps = *v * 1e6;
  if (auto v = f.Integer("packet_size")) c.packet_size = *v;
  if (c.packet_size <= 0) f.FailSection("packet_size must be > 0");
  ParseWindow(f, c.start, c.stop);
  return c;
}

cross::AimdConfig ParseAimd(Fields& f) {
  cross::AimdConfig c;
  if (auto v = f.Integer("packet_size")) c.packet_size = *v;
  if (c.packet_size <= 0) f.FailSection("packet_size must be > 0");
  if (auto v = f.Positive("initial_cwnd")) c.initial_cwnd = *v;
  c.min_rto = MillisField(f.Positive("min_rto_ms"), c.min_rto);
  ParseWindow(f, c.start, c.stop);
  return c;
}

void ParseMetrics(Fields& f, metrics::MetricsConfig& m,
                  std::optional<int64_t>& smoothing,
                  std::optional<SimTime>& interval) {
  if (auto v = f.Integer("smoothing_frames")) {
    if (*v < 1) f.Fail(*f.Located("smoothing_frames"), "must be >= 1");
    smoothing = *v;
  }
  if (auto v = f.Positive("frame_interval_ms")) {
    interval = SimTime::FromSeconds(*v / 1e3);
  }
  m.fairness_window = MillisField(f.Positive("fairness_window_ms"),
                                  m.fairness_window);
  m.start = SecondsField(f.NonNegative("warmup_s"), m.start);
  if (auto v = f.Positive("end_s")) m.end = SimTime::FromSeconds(*v);
  if (Entry* e = f.Find("percentiles")) {
    m.percentiles.clear();
    for (auto part : text::Split(e->value, ',')) {
      auto p = text::ParseDouble(text::Trim(part));
      if (!p || *p < 0 || *p > 100) {
        f.Fail(*e, "percentiles must be numbers in [0, 100]");
      }
      m.percentiles.push_back(*p);
    }
  }
}

struct LinkFields {
  std::optional<double> capacity_mbps;
  std::optional<std::filesystem::path> trace;
  std::optional<int64_t> buffer_packets;
  std::optional<double> buffer_ms;
};

void ParseLink(Fields& f, const std::filesystem::path& base_dir,
               LinkConfig& link, LinkFields& lf) {
  lf.capacity_mbps = f.Positive("capacity_mbps");
  if (auto t = f.String("trace")) {
    std::filesystem::path p(*t);
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) {
      f.Fail(*f.Located("trace"), "trace file not found: " + p.string());
    }
    lf.trace = p;
  }
  if (lf.capacity_mbps && lf.trace) {
    f.FailSection("give either capacity_mbps or trace, not both");
  }
  if (!lf.capacity_mbps && !lf.trace) {
    f.FailSection("link needs capacity_mbps or trace");
  }
  lf.buffer_packets = f.Integer("buffer_packets");
  if (lf.buffer_packets && *lf.buffer_packets < 1) {
    f.Fail(*f.Located("buffer_packets"), "must be >= 1");
  }
  lf.buffer_ms = f.NonNegative("buffer_ms");
  if (lf.buffer_packets && lf.buffer_ms) {
    f.FailSection("give either buffer_packets or buffer_ms, not both");
  }
  link.owd_fwd = MillisField(f.NonNegative("owd_fwd_ms"), link.owd_fwd);
  link.owd_rev = MillisField(f.NonNegative("owd_rev_ms"), link.owd_rev);
  if (auto v = f.Integer("mtu")) {
    if (*v <= 0) f.Fail(*f.Located("mtu"), "must be > 0");
    link.mtu = *v;
  }
}

void FinalizeLink(LinkConfig& link, const LinkFields& lf) {
  if (lf.trace) {
    link.mode = LoadLinkTrace(lf.trace->string());
  } else {
    link.mode = FixedRate{static_cast<int64_t>(std::llround(*lf.capacity_mbps * 1e6))};
  }
  const BitsPerSecond c = link.CapacityBps();
  if (lf.buffer_packets) {
    link.buffer_packets = *lf.buffer_packets;
  } else if (lf.buffer_ms) {
    link.buffer_packets = BufferPacketsFromMs(*lf.buffer_ms, c, link.mtu);
    if (link.buffer_packets < 1) {
      throw ConfigError("buffer_ms " + text::FormatDouble(*lf.buffer_ms) +
                        " holds less than one packet");
    }
  } else {
    link.buffer_packets = static_cast<int64_t>(
        std::llround(kDefaultBufferPacketsPerMbps * c / 1e6));
  }
}

void FinalizeMetrics(metrics::MetricsConfig& m, const LinkConfig& link,
                     std::optional<int64_t> smoothing,
                     std::optional<SimTime> interval, int fps) {
  m.frame_interval = interval.value_or(SimTime::FromSeconds(1.0 / fps));
  if (smoothing) m.smoothing_frames = static_cast<int>(*smoothing);
  m.capacity_bps = link.CapacityBps();
  m.subtract_serialization = !link.trace_driven();
  m.owd_fwd = link.owd_fwd;
}

}  // namespace

Scenario ParseScenario(std::istream& in, const std::string& src,
                       const std::filesystem::path& base_dir) {
  auto sections = ReadSections(in, src);
  Scenario sc;
  LinkFields lf;
  bool saw_scenario = false;
  bool saw_link = false;
  bool saw_metrics = false;
  std::optional<int64_t> smoothing;
  std::optional<SimTime> interval;
  int first_fps = 0;

  for (auto& s : sections) {
    Fields f(s, src);
    if (s.name == "scenario") {
      if (saw_scenario) f.FailSection("section given more than once");
      saw_scenario = true;
      if (auto v = f.String("name")) sc.name = *v;
      if (auto v = f.Integer("seed")) {
        if (*v < 0) f.Fail(*f.Located("seed"), "must be >= 0");
        sc.seed = static_cast<uint64_t>(*v);
      }
      if (auto v = f.Positive("duration_s")) {
        sc.duration = SimTime::FromSeconds(*v);
      }
      if (auto v = f.String("output_dir")) {
        std::filesystem::path p(*v);
        sc.output_dir = p.is_relative() ? base_dir / p : p;
      }
    } else if (s.name == "link") {
      if (saw_link) f.FailSection("section given more than once");
      saw_link = true;
      ParseLink(f, base_dir, sc.link, lf);
    } else if (s.name == "flow") {
      auto type = f.String("type");
      if (!type) f.FailSection("flow needs a type");
      int64_t count = f.Integer("count").value_or(1);
      if (count < 1) f.Fail(*f.Located("count"), "must be >= 1");
      FlowSpec spec;
      if (*type == "sqp") {
        auto c = ParseSqp(f);
        if (first_fps == 0) first_fps = c.video.fps;
        spec = c;
      } else if (*type == "inelastic") {
        spec = ParseInelastic(f);
      } else if (*type == "ideal_elastic") {
        spec = ParseIdealElastic(f);
      } else if (*type == "aimd") {
        spec = ParseAimd(f);
      } else {
        f.Fail(*f.Located("type"),
               "unknown flow type '" + *type +
                   "' (expected sqp, inelastic, ideal_elastic or aimd)");
      }
      for (int64_t i = 0; i < count; ++i) sc.flows.push_back(spec);
    } else if (s.name == "metrics") {
      if (saw_metrics) f.FailSection("section given more than once");
      saw_metrics = true;
      ParseMetrics(f, sc.metrics, smoothing, interval);
    } else {
      f.FailSection("unknown section");
    }
    f.Finish();
  }

  const std::string at = src + ": ";
  if (!saw_link) throw ConfigError(at + "missing [link] section");
  if (sc.flows.empty()) throw ConfigError(at + "at least one [flow] is required");
  int elastic = 0;
  for (const auto& fl : sc.flows) {
    if (std::holds_alternative<cross::IdealElasticConfig>(fl)) ++elastic;
  }
  if (elastic > 1) {
    throw ConfigError(at + "at most one ideal_elastic flow is supported");
  }
  FinalizeLink(sc.link, lf);
  if (lf.trace) sc.link_trace_path = lf.trace;
  for (const auto& fl : sc.flows) {
    if (const auto* q = std::get_if<sqp::SqpFlowConfig>(&fl)) {
      if (q->video.mtu != sc.link.mtu) {
        throw ConfigError(at + "flow mtu " + std::to_string(q->video.mtu) +
                          " differs from link mtu " +
                          std::to_string(sc.link.mtu));
      }
    }
  }
  FinalizeMetrics(sc.metrics, sc.link, smoothing, interval,
                  first_fps > 0 ? first_fps : 60);
  if (!sc.metrics.end) sc.metrics.end = sc.duration;
  if (auto err = sc.metrics.Validate()) {
    throw ConfigError(at + "[metrics]: " + *err);
  }
  return sc;
}

Scenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path.string());
  return ParseScenario(in, path.string(), path.parent_path());
}

metrics::MetricsConfig LoadMetricsConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open metrics config: " + path.string());
  const std::string src = path.string();
  auto sections = ReadSections(in, src);
  metrics::MetricsConfig m;
  std::optional<int64_t> smoothing;
  std::optional<SimTime> interval;
  LinkConfig link;
  bool saw_link = false;
  for (auto& s : sections) {
    Fields f(s, src);
    if (s.name == "metrics") {
      ParseMetrics(f, m, smoothing, interval);
      if (auto v = f.Positive("capacity_mbps")) m.capacity_bps = *v * 1e6;
      if (auto v = f.NonNegative("owd_fwd_ms")) {
        m.owd_fwd = SimTime::FromSeconds(*v / 1e3);
      }
      if (auto v = f.Bool("subtract_serialization")) {
        m.subtract_serialization = *v;
      }
      f.Finish();
    } else if (s.name == "link") {
      LinkFields lf;
      ParseLink(f, path.parent_path(), link, lf);
      FinalizeLink(link, lf);
      saw_link = true;
      f.Finish();
    }
  }
  const auto capacity = m.capacity_bps;
  const auto owd = m.owd_fwd;
  const bool subtract = m.subtract_serialization;
  if (saw_link) {
    FinalizeMetrics(m, link, smoothing, interval, 60);
  } else {
    m.frame_interval = interval.value_or(SimTime::FromSeconds(1.0 / 60));
    if (smoothing) m.smoothing_frames = static_cast<int>(*smoothing);
  }
  // Explicit [metrics] values win over what the link implies.
  if (capacity) m.capacity_bps = capacity;
  if (!saw_link) {
    m.owd_fwd = owd;
    m.subtract_serialization = subtract;
  }
  if (auto err = m.Validate()) throw ConfigError(src + ": [metrics]: " + *err);
  return m;
}

std::optional<SweepAxis> ParseSweepAxis(std::string_view name) {
  if (name == "T") return SweepAxis::kT;
  if (name == "m") return SweepAxis::kM;
  if (name == "owd_multiplier") return SweepAxis::kOwdMultiplier;
  if (name == "buffer") return SweepAxis::kBuffer;
  if (name == "n_flows") return SweepAxis::kNFlows;
  if (name == "cross_rate") return SweepAxis::kCrossRate;
  return std::nullopt;
}

std::string_view ToString(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kT:
      return "T";
    case SweepAxis::kM:
      return "m";
    case SweepAxis::kOwdMultiplier:
      return "owd_multiplier";
    case SweepAxis::kBuffer:
      return "buffer";
    case SweepAxis::kNFlows:
      return "n_flows";
    case SweepAxis::kCrossRate:
      return "cross_rate";
  }
  return "?";
}

Scenario ApplySweepValue(const Scenario& base, SweepAxis axis, double value) {
  Scenario sc = base;
  auto for_sqp = [&](auto&& fn) {
    for (auto& fl : sc.flows) {
      if (auto* q = std::get_if<sqp::SqpFlowConfig>(&fl)) fn(*q);
    }
  };
  const std::string label =
      std::string(ToString(axis)) + "=" + text::FormatDouble(value);
  auto bad = [&](const char* why) {
    throw ConfigError("sweep " + label + ": " + why);
  };
  switch (axis) {
    case SweepAxis::kT:
      for_sqp([&](sqp::SqpFlowConfig& q) { q.params.target_multiplier = value; });
      break;
    case SweepAxis::kM:
      for_sqp([&](sqp::SqpFlowConfig& q) { q.params.pacing_multiplier = value; });
      break;
    case SweepAxis::kOwdMultiplier:
      for_sqp([&](sqp::SqpFlowConfig& q) {
        q.params.owd_window_multiplier = value;
      });
      break;
    case SweepAxis::kBuffer:
      if (value < 1 || value != std::floor(value)) {
        bad("buffer must be a positive whole number of packets");
      }
      sc.link.buffer_packets = static_cast<int64_t>(value);
      break;
    case SweepAxis::kNFlows: {
      if (value < 1 || value != std::floor(value)) {
        bad("n_flows must be a positive integer");
      }
      std::optional<FlowSpec> proto;
      std::vector<FlowSpec> others;
      for (auto& fl : sc.flows) {
        if (std::holds_alternative<sqp::SqpFlowConfig>(fl)) {
          if (!proto) proto = fl;
        } else {
          others.push_back(fl);
        }
      }
      if (!proto) bad("scenario has no sqp flow to replicate");
      sc.flows.assign(static_cast<size_t>(value), *proto);
      sc.flows.insert(sc.flows.end(), others.begin(), others.end());
      break;
    }
    case SweepAxis::kCrossRate: {
      if (!(value > 0)) bad("cross_rate must be > 0");
      bool any = false;
      for (auto& fl : sc.flows) {
        if (auto* c = std::get_if<cross::InelasticConfig>(&fl)) {
          c->rate_bps = value * 1e6;
          any = true;
        }
      }
      if (!any) bad("scenario has no inelastic flow");
      break;
    }
  }
  for (const auto& fl : sc.flows) {
    if (const auto* q = std::get_if<sqp::SqpFlowConfig>(&fl)) {
      if (auto err = q->params.Validate()) bad(err->c_str());
    }
  }
  return sc;
}

}  // namespace sqpsim::scenario
