#include "sqpsim/sim/trace.h"

#include <istream>
#include <ostream>
#include <string>

#include "sqpsim/sim/errors.h"
#include "sqpsim/sim/text.h"

namespace sqpsim {

std::string_view ToString(TraceEventKind kind) {
  switch (kind) {
    case TraceEventKind::kEnqueue:
      return "enqueue";
    case TraceEventKind::kDequeue:
      return "dequeue";
    case TraceEventKind::kDrop:
      return "drop";
    case TraceEventKind::kAck:
      return "ack";
  }
  return "?";
}

std::optional<TraceEventKind> ParseTraceEventKind(std::string_view s) {
  if (s == "enqueue") return TraceEventKind::kEnqueue;
  if (s == "dequeue") return TraceEventKind::kDequeue;
  if (s == "drop") return TraceEventKind::kDrop;
  if (s == "ack") return TraceEventKind::kAck;
  return std::nullopt;
}

void WriteTraceCsv(std::ostream& out, const std::vector<TraceEvent>& events) {
  out << kTraceCsvHeader << '\n';
  for (const auto& e : events) {
    out << e.packet_id << ',' << e.flow_id << ',';
    if (e.frame_id) out << *e.frame_id;
    out << ',' << e.size << ',' << ToString(e.kind) << ',' << e.at.us()
        << '\n';
  }
}

std::vector<TraceEvent> ReadTraceCsv(std::istream& in,
                                     const std::string& source_name) {
  std::vector<TraceEvent> events;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ConfigError(source_name + ":" + std::to_string(line_no) + ": " +
                      what);
  };
  if (!std::getline(in, line)) {
    line_no = 1;
    fail("empty trace file");
  }
  ++line_no;
  if (text::Trim(line) != kTraceCsvHeader) fail("unexpected header");
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = text::Trim(line);
    if (trimmed.empty()) continue;
    const auto cols = text::Split(trimmed, ',');
    if (cols.size() != 6) fail("expected 6 columns");
    TraceEvent e;
    const auto id = text::ParseInt(cols[0]);
    const auto flow = text::ParseInt(cols[1]);
    const auto size = text::ParseInt(cols[3]);
    const auto kind = ParseTraceEventKind(cols[4]);
    const auto at = text::ParseInt(cols[5]);
    if (!id || *id < 0) fail("bad packet_id");
    if (!flow) fail("bad flow_id");
    if (!size || *size <= 0) fail("bad size_bytes");
    if (!kind) fail("bad event kind");
    if (!at || *at < 0) fail("bad time_us");
    if (!cols[2].empty()) {
      const auto frame = text::ParseInt(cols[2]);
      if (!frame) fail("bad frame_id");
      e.frame_id = *frame;
    }
    e.packet_id = static_cast<PacketId>(*id);
    e.flow_id = static_cast<FlowId>(*flow);
    e.size = *size;
    e.kind = *kind;
    e.at = SimTime::Micros(*at);
    events.push_back(e);
  }
  return events;
}

}  // namespace sqpsim
