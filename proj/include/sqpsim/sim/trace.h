#ifndef SQPSIM_SIM_TRACE_H_
#define SQPSIM_SIM_TRACE_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqpsim/sim/packet.h"
#include "sqpsim/sim/units.h"

namespace sqpsim {

enum class TraceEventKind { kEnqueue, kDequeue, kDrop, kAck };

std::string_view ToString(TraceEventKind kind);
std::optional<TraceEventKind> ParseTraceEventKind(std::string_view s);

struct TraceEvent {
  PacketId packet_id = 0;
  FlowId flow_id = 0;
  std::optional<FrameId> frame_id;
  ByteCount size = 0;
  TraceEventKind kind = TraceEventKind::kEnqueue;
  SimTime at;

  bool operator==(const TraceEvent&) const = default;
};

inline constexpr std::string_view kTraceCsvHeader =
    "packet_id,flow_id,frame_id,size_bytes,event,time_us";

// Append-only per-packet event log, in the order events occur.
class TraceRecorder {
 public:
  void Record(const Packet& pkt, TraceEventKind kind, SimTime at) {
    events_.push_back(
        TraceEvent{pkt.packet_id, pkt.flow_id, pkt.frame_id, pkt.size, kind,
                   at});
  }
  const std::vector<TraceEvent>& events() const { return events_; }
  std::vector<TraceEvent> Take() { return std::move(events_); }

 private:
  std::vector<TraceEvent> events_;
};

// CSV with kTraceCsvHeader. frame_id is empty for packets without a frame.
void WriteTraceCsv(std::ostream& out, const std::vector<TraceEvent>& events);
// Throws ConfigError on malformed input.
std::vector<TraceEvent> ReadTraceCsv(std::istream& in,
                                     const std::string& source_name);

}  // namespace sqpsim

#endif  // SQPSIM_SIM_TRACE_H_
