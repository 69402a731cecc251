#include "sqpsim/sim/link.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sqpsim/sim/check.h"
#include "sqpsim/sim/errors.h"
#include "sqpsim/sim/text.h"

namespace sqpsim {

BitsPerSecond LinkConfig::CapacityBps() const {
  if (const auto* fixed = std::get_if<FixedRate>(&mode)) {
    return static_cast<double>(fixed->capacity_bps);
  }
  return std::get<DeliverySchedule>(mode).CeilingBps(mtu);
}

DeliverySchedule ParseLinkTrace(std::istream& in, const std::string& name) {
  DeliverySchedule schedule;
  std::string line;
  int line_no = 0;
  int64_t last_ms = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = text::Trim(line);
    const auto ms = text::ParseInt(trimmed);
    if (!ms || *ms < 0) {
      throw ConfigError(name + ":" + std::to_string(line_no) +
                        ": expected a non-negative integer millisecond "
                        "timestamp, got '" +
                        std::string(trimmed) + "'");
    }
    if (*ms < last_ms) {
      throw ConfigError(name + ":" + std::to_string(line_no) +
                        ": timestamps must be non-decreasing");
    }
    last_ms = *ms;
    schedule.opportunities.push_back(SimTime::Millis(*ms));
  }
  if (schedule.opportunities.empty()) {
    throw ConfigError(name + ":1: link trace is empty");
  }
  if (last_ms <= 0) {
    throw ConfigError(name + ":" + std::to_string(line_no) +
                      ": trace must end at a positive timestamp");
  }
  schedule.cycle = SimTime::Millis(last_ms);
  return schedule;
}

DeliverySchedule LoadLinkTrace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open link trace '" + path + "'");
  return ParseLinkTrace(in, path);
}

int64_t BufferPacketsFromMs(double ms, BitsPerSecond capacity_bps,
                            ByteCount mtu) {
  return static_cast<int64_t>(
      std::floor(ms * capacity_bps / (8.0 * 1000.0 * static_cast<double>(mtu))));
}

BottleneckLink::BottleneckLink(EventLoop& loop, LinkConfig config,
                               TraceRecorder* trace, DeliveryFn on_delivered)
    : loop_(loop),
      config_(std::move(config)),
      trace_(trace),
      on_delivered_(std::move(on_delivered)) {
  SQPSIM_CHECK(config_.buffer_packets >= 1, "buffer must hold a packet");
  if (const auto* fixed = std::get_if<FixedRate>(&config_.mode)) {
    SQPSIM_CHECK(fixed->capacity_bps > 0, "capacity must be positive");
  }
}

EnqueueResult BottleneckLink::Enqueue(Packet pkt) {
  SQPSIM_CHECK(pkt.size > 0, "empty packet");
  if (config_.trace_driven()) {
    SQPSIM_CHECK(pkt.size <= config_.mtu, "packet larger than MTU");
  }
  if (static_cast<int64_t>(occupancy()) >= config_.buffer_packets) {
    pkt.dropped = true;
    ++dropped_;
    if (trace_) trace_->Record(pkt, TraceEventKind::kDrop, loop_.Now());
    return EnqueueResult::kDropped;
  }
  ++enqueued_;
  if (trace_) trace_->Record(pkt, TraceEventKind::kEnqueue, loop_.Now());
  queue_.push_back(std::move(pkt));
  if (!in_service_) StartService();
  return EnqueueResult::kAccepted;
}

ByteCount BottleneckLink::DequeuedBytes(FlowId flow) const {
  const auto it = dequeued_bytes_.find(flow);
  return it == dequeued_bytes_.end() ? 0 : it->second;
}

SimTime BottleneckLink::OpportunityTime(uint64_t index) const {
  const auto& s = std::get<DeliverySchedule>(config_.mode);
  const uint64_t n = s.opportunities.size();
  return s.cycle * static_cast<int64_t>(index / n) + s.opportunities[index % n];
}

uint64_t BottleneckLink::NextOpportunityAtOrAfter(SimTime t) const {
  const auto& s = std::get<DeliverySchedule>(config_.mode);
  const uint64_t n = s.opportunities.size();
  const int64_t cycle = t.us() / s.cycle.us();
  const SimTime offset = t - s.cycle * cycle;
  const auto it = std::lower_bound(s.opportunities.begin(),
                                   s.opportunities.end(), offset);
  const uint64_t idx =
      static_cast<uint64_t>(cycle) * n +
      static_cast<uint64_t>(std::distance(s.opportunities.begin(), it));
  return std::max(idx, next_opportunity_);
}

void BottleneckLink::StartService() {
  SQPSIM_CHECK(!in_service_ && !queue_.empty(), "link not ready to serve");
  in_service_ = std::move(queue_.front());
  queue_.pop_front();
  NoteQueueLength();
  SimTime done;
  if (const auto* fixed = std::get_if<FixedRate>(&config_.mode)) {
    done = loop_.Now() + SerializationTime(in_service_->size,
                                           fixed->capacity_bps);
  } else {
    const uint64_t opp = NextOpportunityAtOrAfter(loop_.Now());
    next_opportunity_ = opp + 1;
    done = OpportunityTime(opp);
  }
  loop_.Schedule(done, [this] { CompleteService(); });
}

void BottleneckLink::CompleteService() {
  Packet pkt = std::move(*in_service_);
  in_service_.reset();
  pkt.delivered_at = loop_.Now();
  ++dequeued_;
  total_dequeued_bytes_ += pkt.size;
  dequeued_bytes_[pkt.flow_id] += pkt.size;
  if (trace_) trace_->Record(pkt, TraceEventKind::kDequeue, loop_.Now());
  if (!queue_.empty()) StartService();
  on_delivered_(std::move(pkt));
}

void BottleneckLink::NoteQueueLength() {
  min_queue_len_ = std::min(min_queue_len_, queue_.size());
}

}  // namespace sqpsim
