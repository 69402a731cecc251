#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "sqpsim/cross/inelastic_flow.h"
#include "sqpsim/metrics/frame_metrics.h"
#include "sqpsim/metrics/summary.h"
#include "sqpsim/metrics/timeline.h"
#include "sqpsim/sim/network.h"

namespace sqpsim::metrics {
namespace {

// Builds trace events packet by packet.
class TraceBuilder {
 public:
  // Accepted packet: enqueued at `in`, leaves the link at `out`.
  TraceBuilder& Through(SimTime in, SimTime out, ByteCount size = 1200,
                        FlowId flow = 1, std::optional<FrameId> frame = {},
                        std::optional<SimTime> ack = {}) {
    const PacketId id = next_++;
    events_.push_back({id, flow, frame, size, TraceEventKind::kEnqueue, in});
    events_.push_back({id, flow, frame, size, TraceEventKind::kDequeue, out});
    if (ack) {
      events_.push_back({id, flow, frame, size, TraceEventKind::kAck, *ack});
    }
    return *this;
  }
  TraceBuilder& Dropped(SimTime at, ByteCount size = 1200, FlowId flow = 1) {
    events_.push_back({next_++, flow, std::nullopt, size,
                       TraceEventKind::kDrop, at});
    return *this;
  }
  std::vector<TraceEvent> Sorted() const {
    auto ev = events_;
    std::stable_sort(ev.begin(), ev.end(),
                     [](const auto& a, const auto& b) { return a.at < b.at; });
    return ev;
  }

 private:
  std::vector<TraceEvent> events_;
  PacketId next_ = 0;
};

SimTime Us(int64_t us) { return SimTime::Micros(us); }

TEST(WindowedFrameSize, Examples) {
  EXPECT_DOUBLE_EQ(WindowedFrameSize(4000, 500, 0, 4), 1000);
  EXPECT_DOUBLE_EQ(WindowedFrameSize(4000, 500, 4000, 4), 0);
  EXPECT_DOUBLE_EQ(WindowedFrameSize(4000, 500, 9000, 4), 0);
  // A slot fuller than the window average wins.
  EXPECT_DOUBLE_EQ(WindowedFrameSize(4000, 3000, 1000, 4), 2000);
  EXPECT_DOUBLE_EQ(WindowedFrameSize(4000, 3000, 0, 1), 4000);
}

TEST(RetrofitFrames, ConstantRateGivesRateTimesInterval) {
  // 1200 B every 1000 us is 9.6 Mbps; I = 10 ms holds exactly 10 packets.
  TraceBuilder b;
  for (int k = 0; k < 1000; ++k) {
    b.Through(Us(1000 * k), Us(1000 * k + 480));
  }
  const auto ev = b.Sorted();
  const auto tl = BuildTimelines(ev).at(1);
  const auto frames =
      RetrofitFrames(tl, SimTime::Zero(), SimTime::Seconds(1), Us(10'000), 4);
  ASSERT_EQ(frames.size(), 97u);
  for (const auto& f : frames) {
    EXPECT_DOUBLE_EQ(f.size, 12'000) << f.index;
    EXPECT_DOUBLE_EQ(f.pending, 0);
  }
}

TEST(FlowTimeline, IngressBytesIsHalfOpenAndCountsDrops) {
  TraceBuilder b;
  b.Through(Us(0), Us(480)).Dropped(Us(100)).Through(Us(200), Us(960), 500);
  const auto ev = b.Sorted();
  const auto tl = BuildTimelines(ev).at(1);
  EXPECT_EQ(tl.IngressBytes(Us(0), Us(100)), 1200);
  EXPECT_EQ(tl.IngressBytes(Us(0), Us(101)), 2400);
  EXPECT_EQ(tl.IngressBytes(Us(0), Us(1000)), 2900);
  EXPECT_EQ(tl.IngressBytes(Us(150), Us(200)), 0);
  EXPECT_EQ(tl.FirstAtOrAfter(Us(150)), 2u);
}

TEST(SimulatedFrameDelays, SinglePacketFrameIsOwdPlusSerialization) {
  // Frame created at 0, reaches the link at 20 ms, leaves 480 us later.
  TraceBuilder b;
  b.Through(Us(20'000), Us(20'480));
  const auto ev = b.Sorted();
  const auto tl = BuildTimelines(ev).at(1);
  const auto origin = Us(20'000);
  const auto frames = RetrofitFrames(tl, origin, Us(200'000), Us(16'667), 1);
  const auto delays =
      SimulatedFrameDelays(tl, frames, origin, Us(16'667), SimTime::Millis(20));
  ASSERT_FALSE(delays.empty());
  EXPECT_FALSE(delays[0].zero_size);
  EXPECT_EQ(delays[0].delay.us(), 20'480);
  // Every later slot is empty and waits for the next frame.
  for (size_t k = 1; k < delays.size(); ++k) {
    EXPECT_TRUE(delays[k].zero_size);
    EXPECT_EQ(delays[k].delay.us(), 16'667);
  }
}

TEST(SimulatedFrameDelays, DroppedByteRidesOnTheNextDeliveredPacket) {
  TraceBuilder b;
  b.Through(Us(0), Us(480)).Dropped(Us(500)).Through(Us(30'000), Us(30'480));
  const auto ev = b.Sorted();
  const auto tl = BuildTimelines(ev).at(1);
  const auto frames = RetrofitFrames(tl, Us(0), Us(100'000), Us(10'000), 1);
  const auto delays = SimulatedFrameDelays(tl, frames, Us(0), Us(10'000), Us(0));
  ASSERT_GE(delays.size(), 1u);
  // Slot 0 holds both early packets; the second was lost.
  EXPECT_DOUBLE_EQ(frames[0].size, 2400);
  EXPECT_EQ(*delays[0].last_byte_ingress, Us(500));
  EXPECT_EQ(*delays[0].delivered_at, Us(30'480));
}

TEST(FrameRtts, OnePacketRoundTrip) {
  TraceBuilder b;
  b.Through(Us(20'000), Us(20'480), 1200, 1, FrameId{7}, Us(40'480));
  const auto ev = b.Sorted();
  const auto rtts = FrameRtts(BuildTimelines(ev).at(1), SimTime::Millis(20));
  ASSERT_EQ(rtts.size(), 1u);
  EXPECT_EQ(rtts[0].frame_id, 7u);
  EXPECT_EQ(rtts[0].rtt.us(), 40'480);
  EXPECT_FALSE(rtts[0].incomplete);
}

TEST(FrameRtts, SpansFirstSendToLastAck) {
  TraceBuilder b;
  b.Through(Us(20'000), Us(20'480), 1200, 1, FrameId{1}, Us(40'480))
      .Through(Us(20'000), Us(30'000), 1200, 1, FrameId{1}, Us(50'000));
  const auto ev = b.Sorted();
  const auto rtts = FrameRtts(BuildTimelines(ev).at(1), SimTime::Millis(20));
  ASSERT_EQ(rtts.size(), 1u);
  EXPECT_EQ(rtts[0].rtt.us(), 50'000);
  EXPECT_GT(rtts[0].rtt.us(), 40'480);
}

TEST(FrameRtts, FlagsFramesWithUnackedPackets) {
  TraceBuilder b;
  b.Through(Us(20'000), Us(20'480), 1200, 1, FrameId{1}, Us(40'480));
  auto ev = b.Sorted();
  ev.push_back({99, 1, FrameId{1}, 1200, TraceEventKind::kDrop, Us(20'100)});
  const auto rtts = FrameRtts(BuildTimelines(ev).at(1), SimTime::Millis(20));
  ASSERT_EQ(rtts.size(), 1u);
  EXPECT_TRUE(rtts[0].incomplete);
}

TEST(Percentile, NearestRank) {
  std::vector<double> v{15, 20, 35, 40, 50};
  EXPECT_EQ(*Percentile(v, 30), 20);
  EXPECT_EQ(*Percentile(v, 40), 20);
  EXPECT_EQ(*Percentile(v, 50), 35);
  EXPECT_EQ(*Percentile(v, 100), 50);
  EXPECT_EQ(*Percentile(v, 0), 15);
  std::vector<double> ten(10);
  for (int k = 0; k < 10; ++k) ten[k] = k + 1;
  EXPECT_EQ(*Percentile(ten, 90), 9);
  EXPECT_FALSE(Percentile({}, 50).has_value());
}

// F(t) straight from its definition, scanning raw ingress events.
std::vector<double> OracleFrameSizes(const std::vector<TraceEvent>& ev,
                                     int64_t origin, int64_t end,
                                     int64_t interval, int n) {
  auto s = [&](int64_t t1, int64_t t2) {
    double bytes = 0;
    for (const auto& e : ev) {
      if ((e.kind == TraceEventKind::kEnqueue ||
           e.kind == TraceEventKind::kDrop) &&
          e.at.us() >= t1 && e.at.us() < t2) {
        bytes += static_cast<double>(e.size);
      }
    }
    return bytes;
  };
  std::vector<double> out;
  double assigned = 0;
  for (int64_t t = origin; t + n * interval <= end; t += interval) {
    const double p = std::max(0.0, assigned - s(origin, t));
    const double f = std::max({(s(t, t + n * interval) - p) / n,
                               s(t, t + interval) - p, 0.0});
    out.push_back(f);
    assigned += f;
  }
  return out;
}

TEST(RetrofitFrames, RandomTracesKeepTheNFrameBound) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const int64_t interval = std::uniform_int_distribution<int64_t>(2'000, 20'000)(rng);
    // Bursts separated by idle stretches, with occasional drops.
    TraceBuilder b;
    int64_t t = std::uniform_int_distribution<int64_t>(0, 5'000)(rng);
    const int packets = std::uniform_int_distribution<int>(1, 150)(rng);
    for (int k = 0; k < packets; ++k) {
      const ByteCount size = std::uniform_int_distribution<ByteCount>(40, 1500)(rng);
      if (std::bernoulli_distribution(0.05)(rng)) {
        b.Dropped(Us(t), size);
      } else {
        b.Through(Us(t), Us(t + 500), size);
      }
      t += std::bernoulli_distribution(0.1)(rng)
               ? std::uniform_int_distribution<int64_t>(10'000, 200'000)(rng)
               : std::uniform_int_distribution<int64_t>(0, 2'000)(rng);
    }
    // The last packet may be a drop: finish with a delivered one so every
    // frame finds a carrier.
    b.Through(Us(t + interval * (n + 1)), Us(t + interval * (n + 1) + 500));
    const auto ev = b.Sorted();
    const int64_t end = ev.back().at.us() + interval * (n + 2);
    const auto tl = BuildTimelines(ev).at(1);
    const auto frames = RetrofitFrames(tl, Us(0), Us(end), Us(interval), n);
    const auto oracle = OracleFrameSizes(ev, 0, end, interval, n);
    ASSERT_EQ(frames.size(), oracle.size());
    for (size_t k = 0; k < frames.size(); ++k) {
      ASSERT_GE(frames[k].size, 0.0);
      ASSERT_GE(frames[k].pending, 0.0);
      ASSERT_NEAR(frames[k].size, oracle[k], 1e-6) << trial << "/" << k;
    }
    for (const auto& d : SimulatedFrameDelays(tl, frames, Us(0), Us(interval),
                                              SimTime::Zero())) {
      if (d.zero_size) continue;
      ASSERT_TRUE(d.last_byte_ingress);
      // The frame is fully handed to the link within n frame intervals.
      const SimTime slot = Us(interval * d.index);
      ASSERT_LT(*d.last_byte_ingress, slot + Us(interval * n))
          << "trial " << trial << " frame " << d.index;
    }
  }
}

TEST(Summarize, IdleLinkHasZeroUtilization) {
  MetricsConfig cfg;
  cfg.capacity_bps = 20e6;
  cfg.end = SimTime::Seconds(10);
  const auto r = Summarize({}, cfg);
  ASSERT_TRUE(r.utilization);
  EXPECT_EQ(*r.utilization, 0.0);
  EXPECT_TRUE(r.flows.empty());
}

std::vector<TraceEvent> RunCbr(std::vector<double> rates, SimTime duration) {
  EventLoop loop;
  TraceRecorder trace;
  LinkConfig link;
  link.mode = FixedRate{20'000'000};
  Network net(loop, link, &trace);
  std::vector<std::unique_ptr<cross::InelasticFlow>> flows;
  FlowId id = 1;
  for (double r : rates) {
    flows.push_back(std::make_unique<cross::InelasticFlow>(
        id++, net, cross::InelasticConfig{r, 1200, SimTime::Zero(), duration}));
    net.Attach(flows.back().get());
    flows.back()->Start();
  }
  loop.RunUntil(duration + SimTime::Seconds(1));
  return trace.Take();
}

TEST(Summarize, HalfRateCbrIsHalfUtilization) {
  const auto ev = RunCbr({10e6}, SimTime::Seconds(10));
  MetricsConfig cfg;
  cfg.capacity_bps = 20e6;
  cfg.end = SimTime::Seconds(10);
  const auto r = Summarize(ev, cfg);
  ASSERT_TRUE(r.utilization);
  EXPECT_NEAR(*r.utilization, 0.5, 0.005);
  EXPECT_EQ(r.loss_rate, 0.0);
  // Frame bitrate from F(t) tracks the sending rate.
  const auto* f = r.Flow(1);
  ASSERT_NE(f, nullptr);
  for (const auto& pv : f->frame_bitrate_bps) {
    EXPECT_NEAR(pv.value, 10e6, 0.08 * 10e6) << "P" << pv.p;
  }
}

TEST(Summarize, EqualFlowsAreFairInEveryWindow) {
  const auto ev = RunCbr({6e6, 6e6}, SimTime::Seconds(5));
  MetricsConfig cfg;
  cfg.end = SimTime::Seconds(5);
  const auto r = Summarize(ev, cfg);
  ASSERT_EQ(r.jain_series.size(), 10u);
  for (const auto& p : r.jain_series) EXPECT_NEAR(p.value, 1.0, 1e-3);
  ASSERT_TRUE(r.jain_min);
  EXPECT_NEAR(*r.jain_min, 1.0, 1e-3);
}

TEST(Summarize, ThroughputTimesDurationIsDeliveredBytes) {
  const auto ev = RunCbr({7e6, 3.3e6}, SimTime::Seconds(4));
  MetricsConfig cfg;
  cfg.start = SimTime::Millis(1'234);
  cfg.end = SimTime::Millis(3'777);
  const auto r = Summarize(ev, cfg);
  const double secs = (r.end - r.start).seconds();
  EXPECT_NEAR(r.throughput_bps * secs / 8, static_cast<double>(r.delivered_bytes), 1e-6);
  for (const auto& f : r.flows) {
    EXPECT_NEAR(f.throughput_bps * secs / 8, static_cast<double>(f.delivered_bytes), 1e-6);
  }
}

TEST(QueuingDelays, FixedRateExcludesOwnSerialization) {
  TraceBuilder b;
  b.Through(Us(0), Us(480)).Through(Us(0), Us(960));
  const auto ev = b.Sorted();
  MetricsConfig cfg;
  cfg.capacity_bps = 20e6;
  const auto d = QueuingDelaysUs(ev, cfg, std::nullopt, Us(0), Us(10'000));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], 0);
  EXPECT_EQ(d[1], 480);
}

TEST(ReportOutput, CsvAndSummaryShareRows) {
  const auto ev = RunCbr({5e6}, SimTime::Seconds(2));
  MetricsConfig cfg;
  cfg.capacity_bps = 20e6;
  const auto rows = ReportRows(Summarize(ev, cfg));
  std::ostringstream csv;
  std::ostringstream kv;
  WriteReportCsv(csv, rows);
  WriteSummary(kv, rows);
  EXPECT_EQ(csv.str().rfind("flow_id,metric,value\n", 0), 0u);
  EXPECT_NE(csv.str().find("1,throughput_bps,"), std::string::npos);
  EXPECT_NE(kv.str().find("flow.1.throughput_bps="), std::string::npos);
  EXPECT_NE(kv.str().find("all.utilization="), std::string::npos);
}

TEST(MetricsConfig, RejectsZeroSmoothing) {
  MetricsConfig cfg;
  cfg.smoothing_frames = 0;
  EXPECT_TRUE(cfg.Validate().has_value());
  EXPECT_FALSE(MetricsConfig{}.Validate().has_value());
}

}  // namespace
}  // namespace sqpsim::metrics
