#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "sqpsim/sim/errors.h"
#include "sqpsim/sim/event_loop.h"
#include "sqpsim/sim/link.h"
#include "sqpsim/sim/network.h"
#include "sqpsim/sim/random.h"
#include "sqpsim/sim/text.h"
#include "sqpsim/sim/trace.h"

namespace sqpsim {
namespace {


Packet MakePacket(PacketId id, ByteCount size = 1200, FlowId flow = 1) {
  Packet p;
  p.packet_id = id;
  p.flow_id = flow;
  p.size = size;
  return p;
}

TEST(Units, SerializationTimes) {
  EXPECT_EQ(SerializationTime(1200, 20'000'000).us(), 480);
  EXPECT_EQ(SerializationTime(1200, 10'000'000).us(), 960);
  // 1 byte at 3 bps is 2.67 s; half-up rounding.
  EXPECT_EQ(SerializationTime(1, 3).us(), 2'666'667);
  EXPECT_EQ(SimTime::FromSeconds(0.0000005).us(), 1);
  EXPECT_EQ(SimTime::Micros(3).Scaled(0.5).us(), 2);
}

TEST(EventLoop, ZeroDelayEventFiresFirst) {
  EventLoop loop;
  std::vector<int> order;
  loop.Schedule(SimTime::Micros(5), [&] { order.push_back(2); });
  loop.Schedule(SimTime::Zero(), [&] { order.push_back(1); });
  loop.RunUntil(SimTime::Micros(10));
  EXPECT_EQ(order, (std::vector<int>{1, 2}));
}

TEST(EventLoop, TiesFireInInsertionOrder) {
  EventLoop loop;
  std::string order;
  loop.Schedule(SimTime::Micros(100), [&] { order += 'A'; });
  loop.Schedule(SimTime::Micros(100), [&] { order += 'B'; });
  loop.RunUntil(SimTime::Micros(100));
  EXPECT_EQ(order, "AB");
}

TEST(EventLoop, EarlierTimeFiresFirst) {
  EventLoop loop;
  std::vector<int64_t> fired;
  loop.Schedule(SimTime::Micros(50), [&] { fired.push_back(loop.Now().us()); });
  loop.Schedule(SimTime::Micros(20), [&] { fired.push_back(loop.Now().us()); });
  loop.RunUntil(SimTime::Micros(100));
  EXPECT_EQ(fired, (std::vector<int64_t>{20, 50}));
  EXPECT_EQ(loop.Now().us(), 100);
}

TEST(EventLoop, CancelledEventDoesNotFire) {
  EventLoop loop;
  bool fired = false;
  auto h = loop.Schedule(SimTime::Micros(10), [&] { fired = true; });
  EXPECT_TRUE(loop.Cancel(h));
  EXPECT_FALSE(loop.Cancel(h));
  loop.RunUntil(SimTime::Micros(20));
  EXPECT_FALSE(fired);
}

TEST(EventLoopDeathTest, SchedulingInThePastAborts) {
  EXPECT_DEATH(
      {
        EventLoop loop;
        loop.RunUntil(SimTime::Micros(100));
        loop.Schedule(SimTime::Micros(99), [] {});
      },
      "past");
}

TEST(SplitMix64, MatchesReferenceSequence) {
  SplitMix64 a(0);
  EXPECT_EQ(a.Next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(a.Next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(a.Next(), 0x06c45d188009454fULL);
  SplitMix64 b(42);
  EXPECT_EQ(b.Next(), 0xbdd732262feb6e95ULL);
  SplitMix64 c(7);
  std::vector<uint64_t> draws;
  for (int i = 0; i < 5; ++i) draws.push_back(c.UniformInclusive(1000));
  EXPECT_EQ(draws, (std::vector<uint64_t>{310, 451, 308, 528, 348}));
}

TEST(SplitMix64, UnitDrawsStayInRange) {
  SplitMix64 r(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.UniformUnit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

struct LinkHarness {
  explicit LinkHarness(LinkConfig cfg)
      : link(loop, std::move(cfg), &trace,
             [this](Packet p) { delivered.push_back(p); }) {}
  EventLoop loop;
  TraceRecorder trace;
  std::vector<Packet> delivered;
  BottleneckLink link;
};

LinkConfig FixedLink(int64_t bps, int64_t buffer) {
  LinkConfig c;
  c.mode = FixedRate{bps};
  c.buffer_packets = buffer;
  return c;
}

TEST(BottleneckLink, EmptyQueueWithRoomForOneAccepts) {
  LinkHarness h(FixedLink(20'000'000, 1));
  EXPECT_EQ(h.link.Enqueue(MakePacket(1)), EnqueueResult::kAccepted);
}

TEST(BottleneckLink, FullQueueDrops) {
  LinkHarness h(FixedLink(20'000'000, 3));
  for (PacketId i = 0; i < 3; ++i) {
    EXPECT_EQ(h.link.Enqueue(MakePacket(i)), EnqueueResult::kAccepted);
  }
  EXPECT_EQ(h.link.occupancy(), 3u);
  EXPECT_EQ(h.link.Enqueue(MakePacket(3)), EnqueueResult::kDropped);
  EXPECT_EQ(h.link.dropped(), 1u);
  ASSERT_EQ(h.trace.events().size(), 4u);
  EXPECT_EQ(h.trace.events().back().kind, TraceEventKind::kDrop);
}

TEST(BottleneckLink, FixedRateServiceTimes) {
  LinkHarness h(FixedLink(20'000'000, 10));
  h.loop.Schedule(SimTime::Micros(1000), [&] {
    h.link.Enqueue(MakePacket(1));
    h.link.Enqueue(MakePacket(2));
  });
  h.loop.RunUntil(SimTime::Millis(10));
  ASSERT_EQ(h.delivered.size(), 2u);
  EXPECT_EQ(h.delivered[0].delivered_at->us(), 1480);
  EXPECT_EQ(h.delivered[1].delivered_at->us(), 1960);
  EXPECT_EQ(h.link.DequeuedBytes(1), 2400);
}

TEST(BottleneckLink, OccupancyNeverExceedsLimit) {
  LinkHarness h(FixedLink(5'000'000, 4));
  SplitMix64 rng(9);
  size_t peak = 0;
  for (int i = 0; i < 2000; ++i) {
    h.loop.Schedule(SimTime::Micros(i * 700 + static_cast<int64_t>(rng.UniformInclusive(600))),
                    [&, i] {
                      h.link.Enqueue(MakePacket(static_cast<PacketId>(i)));
                      peak = std::max(peak, h.link.occupancy());
                    });
  }
  h.loop.RunUntil(SimTime::Seconds(5));
  EXPECT_LE(peak, 4u);
  EXPECT_GT(h.link.dropped(), 0u);
  EXPECT_EQ(h.link.enqueued(), h.link.dequeued());
}

TEST(LinkTrace, ParsesOpportunitiesAndCycle) {
  std::istringstream in("1\n1\n2\n");
  const auto s = ParseLinkTrace(in, "t");
  ASSERT_EQ(s.opportunities.size(), 3u);
  EXPECT_EQ(s.opportunities[0].us(), 1000);
  EXPECT_EQ(s.opportunities[1].us(), 1000);
  EXPECT_EQ(s.opportunities[2].us(), 2000);
  EXPECT_EQ(s.cycle.us(), 2000);
}

TEST(LinkTrace, CeilingFromOpportunityDensity) {
  std::ostringstream text;
  for (int ms = 1; ms <= 1000; ++ms) {
    for (int k = 0; k < 12; ++k) text << ms << '\n';
  }
  std::istringstream in(text.str());
  const auto s = ParseLinkTrace(in, "t");
  EXPECT_DOUBLE_EQ(s.CeilingBps(1200), 115.2e6);
}

TEST(LinkTrace, ErrorsNameTheLine) {
  std::istringstream bad("1\nabc\n3\n");
  try {
    ParseLinkTrace(bad, "cell.trace");
    FAIL() << "expected an error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cell.trace:2"), std::string::npos)
        << e.what();
  }
  std::istringstream decreasing("5\n3\n");
  EXPECT_THROW(ParseLinkTrace(decreasing, "t"), ConfigError);
  std::istringstream empty("");
  EXPECT_THROW(ParseLinkTrace(empty, "t"), ConfigError);
}

TEST(BottleneckLink, TraceDrivenUsesOneOpportunityPerPacket) {
  LinkConfig c;
  std::istringstream in("1\n1\n2\n4\n");
  c.mode = ParseLinkTrace(in, "t");
  c.buffer_packets = 10;
  LinkHarness h(c);
  for (PacketId i = 0; i < 5; ++i) h.link.Enqueue(MakePacket(i));
  h.loop.RunUntil(SimTime::Millis(20));
  std::vector<int64_t> at;
  for (const auto& p : h.delivered) at.push_back(p.delivered_at->us());
  // Second cycle starts at 4 ms, so its first opportunity is at 5 ms.
  EXPECT_EQ(at, (std::vector<int64_t>{1000, 1000, 2000, 4000, 5000}));
}

TEST(BottleneckLink, UnusedOpportunitiesAreLost) {
  LinkConfig c;
  std::istringstream in("1\n2\n3\n4\n");
  c.mode = ParseLinkTrace(in, "t");
  LinkHarness h(c);
  h.loop.Schedule(SimTime::Micros(2500), [&] { h.link.Enqueue(MakePacket(1)); });
  h.loop.RunUntil(SimTime::Millis(10));
  ASSERT_EQ(h.delivered.size(), 1u);
  EXPECT_EQ(h.delivered[0].delivered_at->us(), 3000);
}

TEST(Link, BufferFromMilliseconds) {
  // 120 ms at 20 Mbps with 1200-byte packets is 250 packets.
  EXPECT_EQ(BufferPacketsFromMs(120, 20e6, 1200), 250);
  EXPECT_EQ(BufferPacketsFromMs(8, 20e6, 1200), 16);
  EXPECT_EQ(BufferPacketsFromMs(0.3, 20e6, 1200), 0);
}

class EchoFlow : public TrafficFlow {
 public:
  explicit EchoFlow(Network& net) : net_(net) {}
  FlowId id() const override { return 1; }
  std::string_view kind() const override { return "echo"; }
  void Start() override {
    Packet p = MakePacket(0);
    p.frame_id = 7;
    net_.Send(p);
  }
  void OnAck(const Packet& pkt) override {
    acked_at = net_.Now();
    acked = pkt;
  }
  Network& net_;
  SimTime acked_at;
  Packet acked;
};

TEST(Network, OnePacketRoundTrip) {
  EventLoop loop;
  TraceRecorder trace;
  Network net(loop, FixedLink(20'000'000, 10), &trace);
  EchoFlow flow(net);
  net.Attach(&flow);
  flow.Start();
  loop.RunUntil(SimTime::Seconds(1));
  EXPECT_EQ(flow.acked_at.us(), 40'480);
  EXPECT_EQ(flow.acked.delivered_at->us(), 20'480);
  EXPECT_EQ(flow.acked.sent_at.us(), 0);
  ASSERT_EQ(trace.events().size(), 3u);
  EXPECT_EQ(trace.events()[0].kind, TraceEventKind::kEnqueue);
  EXPECT_EQ(trace.events()[1].kind, TraceEventKind::kDequeue);
  EXPECT_EQ(trace.events()[2].kind, TraceEventKind::kAck);
}

TEST(TraceCsv, RoundTrips) {
  std::vector<TraceEvent> events{
      {1, 2, 5, 1200, TraceEventKind::kEnqueue, SimTime::Micros(10)},
      {1, 2, 5, 1200, TraceEventKind::kDequeue, SimTime::Micros(490)},
      {2, 3, std::nullopt, 800, TraceEventKind::kDrop, SimTime::Micros(500)},
      {1, 2, 5, 1200, TraceEventKind::kAck, SimTime::Micros(20490)}};
  std::ostringstream out;
  WriteTraceCsv(out, events);
  EXPECT_EQ(out.str().substr(0, kTraceCsvHeader.size()), kTraceCsvHeader);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadTraceCsv(in, "x"), events);
}

TEST(TraceCsv, RejectsBadRows) {
  std::istringstream in(std::string(kTraceCsvHeader) +
                        "\n1,1,,1200,teleport,5\n");
  try {
    ReadTraceCsv(in, "trace.csv");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("trace.csv:2"), std::string::npos);
  }
}

TEST(Text, StrictNumberParsing) {
  EXPECT_EQ(text::ParseInt("42"), 42);
  EXPECT_FALSE(text::ParseInt("42x"));
  EXPECT_FALSE(text::ParseInt(""));
  EXPECT_EQ(text::ParseDouble("0.25"), 0.25);
  EXPECT_FALSE(text::ParseDouble("1e"));
  EXPECT_EQ(text::FormatDouble(0.1), "0.1");
}

}  // namespace
}  // namespace sqpsim
