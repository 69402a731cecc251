#ifndef SQPSIM_SIM_LINK_H_
#define SQPSIM_SIM_LINK_H_

#include <deque>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqpsim/sim/event_loop.h"
#include "sqpsim/sim/packet.h"
#include "sqpsim/sim/trace.h"
#include "sqpsim/sim/units.h"

namespace sqpsim {

inline constexpr ByteCount kDefaultMtu = 1200;

struct FixedRate {
  int64_t capacity_bps = 0;
};

// MahiMahi-style delivery schedule: each opportunity releases at most one
// packet of up to MTU bytes. The schedule repeats every `cycle`.
struct DeliverySchedule {
  std::vector<SimTime> opportunities;  // sorted, within [0, cycle]
  SimTime cycle;

  // Long-run ceiling for packets of `mtu` bytes.
  BitsPerSecond CeilingBps(ByteCount mtu) const {
    return static_cast<double>(opportunities.size()) *
           static_cast<double>(mtu) * 8.0 / cycle.seconds();
  }
};

struct LinkConfig {
  std::variant<FixedRate, DeliverySchedule> mode = FixedRate{20'000'000};
  // Packets held at the bottleneck, counting the one being served.
  int64_t buffer_packets = 200;
  SimTime owd_fwd = SimTime::Millis(20);
  SimTime owd_rev = SimTime::Millis(20);
  ByteCount mtu = kDefaultMtu;

  bool trace_driven() const {
    return std::holds_alternative<DeliverySchedule>(mode);
  }
  // Nominal capacity: the fixed rate, or the trace ceiling.
  BitsPerSecond CapacityBps() const;
};

// One non-negative integer millisecond timestamp per line. Throws ConfigError
// naming the line on malformed input, decreasing timestamps or empty input.
DeliverySchedule ParseLinkTrace(std::istream& in, const std::string& name);
DeliverySchedule LoadLinkTrace(const std::string& path);

// Converts a buffer expressed in milliseconds at `capacity_bps` into whole
// MTU-sized packets, rounding down.
int64_t BufferPacketsFromMs(double ms, BitsPerSecond capacity_bps,
                            ByteCount mtu);

enum class EnqueueResult { kAccepted, kDropped };

// Single drop-tail bottleneck. The packet currently being serialized does
// not count against the buffer limit.
class BottleneckLink {
 public:
  using DeliveryFn = std::function<void(Packet)>;

  BottleneckLink(EventLoop& loop, LinkConfig config, TraceRecorder* trace,
                 DeliveryFn on_delivered);
  BottleneckLink(const BottleneckLink&) = delete;
  BottleneckLink& operator=(const BottleneckLink&) = delete;

  EnqueueResult Enqueue(Packet pkt);

  const LinkConfig& config() const { return config_; }
  // Packets waiting behind the one in service.
  size_t queue_length() const { return queue_.size(); }
  // Everything held at the bottleneck; this is what the buffer limits.
  size_t occupancy() const { return queue_.size() + (in_service_ ? 1 : 0); }
  bool busy() const { return in_service_.has_value(); }

  uint64_t enqueued() const { return enqueued_; }
  uint64_t dequeued() const { return dequeued_; }
  uint64_t dropped() const { return dropped_; }

  // Bytes of `flow` that have completed service so far.
  ByteCount DequeuedBytes(FlowId flow) const;
  ByteCount TotalDequeuedBytes() const { return total_dequeued_bytes_; }

  // Smallest waiting-queue length seen since the last call to
  // ResetMinQueueLength().
  size_t MinQueueLength() const { return min_queue_len_; }
  void ResetMinQueueLength() { min_queue_len_ = queue_.size(); }

 private:
  void StartService();
  void CompleteService();
  SimTime OpportunityTime(uint64_t index) const;
  uint64_t NextOpportunityAtOrAfter(SimTime t) const;
  void NoteQueueLength();

  EventLoop& loop_;
  LinkConfig config_;
  TraceRecorder* trace_;
  DeliveryFn on_delivered_;

  std::deque<Packet> queue_;
  std::optional<Packet> in_service_;
  // Trace mode: index of the first opportunity not yet used or skipped.
  uint64_t next_opportunity_ = 0;

  uint64_t enqueued_ = 0;
  uint64_t dequeued_ = 0;
  uint64_t dropped_ = 0;
  ByteCount total_dequeued_bytes_ = 0;
  std::map<FlowId, ByteCount> dequeued_bytes_;
  size_t min_queue_len_ = 0;
};

}  // namespace sqpsim

#endif  // SQPSIM_SIM_LINK_H_
