#include <gtest/gtest.h>

#include <numeric>

#include "sqpsim/cross/aimd_flow.h"
#include "sqpsim/cross/ideal_elastic_flow.h"
#include "sqpsim/cross/inelastic_flow.h"
#include "sqpsim/sim/network.h"
#include "sqpsim/video/video_source.h"

namespace sqpsim {
namespace {

using video::VideoConfig;
using video::VideoSource;

TEST(VideoSource, PerfectEncoderFrameSize) {
  VideoSource src(VideoConfig{}, SplitMix64(1));
  const auto e = src.NextFrame(18e6, SimTime::Zero());
  EXPECT_EQ(e.frame.size, 37'500);
  EXPECT_EQ(e.frame.full_size, 37'500);
  EXPECT_EQ(e.next_at.us(), 16'667);
}

TEST(VideoSource, UndershootCapShrinksFrameButNotFullSize) {
  VideoConfig cfg;
  cfg.undershoot.push_back({SimTime::Seconds(1), SimTime::Seconds(3), 2e6});
  VideoSource src(cfg, SplitMix64(1));
  const auto before = src.NextFrame(18e6, SimTime::Millis(500));
  EXPECT_EQ(before.frame.size, 37'500);
  const auto capped = src.NextFrame(18e6, SimTime::Seconds(1));
  EXPECT_EQ(capped.frame.size, 4'167);
  EXPECT_EQ(capped.frame.full_size, 37'500);
  EXPECT_NEAR(static_cast<double>(capped.frame.full_size) / capped.frame.size,
              9.0, 0.01);
  const auto after = src.NextFrame(18e6, SimTime::Seconds(3));
  EXPECT_EQ(after.frame.size, 37'500);
}

TEST(VideoSource, OvershootMultipliesOneFrame) {
  VideoConfig cfg;
  cfg.overshoot[1] = 2.0;
  VideoSource src(cfg, SplitMix64(1));
  EXPECT_EQ(src.NextFrame(6e6, SimTime::Zero()).frame.size, 12'500);
  const auto big = src.NextFrame(6e6, SimTime::Zero()).frame;
  EXPECT_EQ(big.size, 25'000);
  EXPECT_EQ(big.full_size, 25'000);
}

TEST(VideoSource, OneSidedJitterBounds) {
  VideoConfig cfg;
  cfg.jitter = SimTime::Millis(1);
  VideoSource src(cfg, SplitMix64(77));
  SimTime now;
  int64_t lo = INT64_MAX;
  int64_t hi = 0;
  for (int i = 0; i < 20'000; ++i) {
    const auto e = src.NextFrame(10e6, now);
    const int64_t gap = (e.next_at - now).us();
    lo = std::min(lo, gap);
    hi = std::max(hi, gap);
    now = e.next_at;
  }
  EXPECT_GE(lo, 16'667);
  EXPECT_LE(hi, 16'667 + 1'000);
  // Both ends of the range are reachable.
  EXPECT_LT(lo, 16'667 + 10);
  EXPECT_GT(hi, 16'667 + 990);
}

TEST(VideoSource, SymmetricJitterBounds) {
  VideoConfig cfg;
  cfg.jitter = SimTime::Millis(1);
  cfg.jitter_mode = video::JitterMode::kSymmetric;
  VideoSource src(cfg, SplitMix64(77));
  SimTime now;
  for (int i = 0; i < 5'000; ++i) {
    const auto e = src.NextFrame(10e6, now);
    const int64_t gap = (e.next_at - now).us();
    ASSERT_GE(gap, 15'667);
    ASSERT_LE(gap, 17'667);
    now = e.next_at;
  }
}

TEST(VideoConfig, FloorIsTwoPacketsPerFrame) {
  EXPECT_DOUBLE_EQ(VideoConfig{}.FloorBps(), 1.152e6);
}

TEST(Packetize, SplitsIntoMtuPackets) {
  EXPECT_EQ(video::Packetize(2500, 1200),
            (std::vector<ByteCount>{1200, 1200, 100}));
  EXPECT_EQ(video::Packetize(1200, 1200), (std::vector<ByteCount>{1200}));
  const auto p = video::Packetize(37'500, 1200);
  EXPECT_EQ(std::accumulate(p.begin(), p.end(), ByteCount{0}), 37'500);
}

LinkConfig Fixed(int64_t bps) {
  LinkConfig c;
  c.mode = FixedRate{bps};
  return c;
}

TEST(InelasticFlow, PacketSpacing) {
  EventLoop loop;
  Network net(loop, Fixed(20'000'000), nullptr);
  cross::InelasticFlow ten(1, net, {10e6, 1200, SimTime::Zero(), SimTime::Max()});
  EXPECT_EQ(ten.SendTime(1).us(), 960);
  EXPECT_EQ(ten.SendTime(1000).us(), 960'000);
  cross::InelasticFlow twenty(2, net, {20e6, 1200, SimTime::Zero(), SimTime::Max()});
  EXPECT_EQ(twenty.SendTime(1).us(), 480);
  // 3 Mbps: 3200 us exactly; 7 Mbps: 1371.43 us, rounded per packet.
  cross::InelasticFlow seven(3, net, {7e6, 1200, SimTime::Zero(), SimTime::Max()});
  EXPECT_EQ(seven.SendTime(1).us(), 1371);
  EXPECT_EQ(seven.SendTime(7).us(), 9600);
}

TEST(InelasticFlow, DeliversItsRate) {
  EventLoop loop;
  TraceRecorder trace;
  Network net(loop, Fixed(20'000'000), &trace);
  cross::InelasticFlow f(1, net, {4e6, 1200, SimTime::Seconds(1), SimTime::Seconds(3)});
  net.Attach(&f);
  f.Start();
  loop.RunUntil(SimTime::Seconds(4));
  // 2 s at 4 Mbps with 1200-byte packets.
  EXPECT_NEAR(static_cast<double>(f.packets_sent()), 2 * 4e6 / 9600, 1);
  EXPECT_EQ(net.link().dropped(), 0u);
}

TEST(IdealElasticFlow, FillsAnEmptyLink) {
  EventLoop loop;
  Network net(loop, Fixed(20'000'000), nullptr);
  cross::IdealElasticFlow f(1, net, {});
  net.Attach(&f);
  f.Start();
  loop.RunUntil(SimTime::Millis(500));
  EXPECT_NEAR(f.current_rate(), 20e6, 0.02 * 20e6);
  const ByteCount before = net.link().DequeuedBytes(1);
  loop.RunUntil(SimTime::Millis(1500));
  const double rate = RateOver(net.link().DequeuedBytes(1) - before, SimTime::Seconds(1));
  EXPECT_NEAR(rate, 20e6, 0.02 * 20e6);
  EXPECT_LT(net.link().queue_length(), 5u);
}

TEST(IdealElasticFlow, LeavesRoomForInelasticTraffic) {
  EventLoop loop;
  Network net(loop, Fixed(20'000'000), nullptr);
  cross::InelasticFlow cbr(1, net, {6e6, 1200, SimTime::Zero(), SimTime::Max()});
  cross::IdealElasticFlow el(2, net, {});
  net.Attach(&cbr);
  net.Attach(&el);
  cbr.Start();
  el.Start();
  loop.RunUntil(SimTime::Seconds(2));
  EXPECT_NEAR(el.current_rate(), 14e6, 0.03 * 20e6);
}

TEST(AimdFlow, MultiplicativeDecrease) {
  EventLoop loop;
  Network net(loop, Fixed(20'000'000), nullptr);
  cross::AimdConfig cfg;
  cfg.initial_cwnd = 40;
  cross::AimdFlow f(1, net, cfg);
  f.OnLoss(0);
  EXPECT_DOUBLE_EQ(f.cwnd(), 20);
  EXPECT_EQ(f.decreases(), 1u);
}

TEST(AimdFlow, SaturatesLinkAndBacksOffOnDrops) {
  EventLoop loop;
  LinkConfig link = Fixed(10'000'000);
  link.buffer_packets = 40;
  Network net(loop, link, nullptr);
  cross::AimdFlow f(1, net, {});
  net.Attach(&f);
  f.Start();
  loop.RunUntil(SimTime::Seconds(20));
  const double rate = RateOver(net.link().DequeuedBytes(1), SimTime::Seconds(20));
  EXPECT_GT(rate, 0.8 * 10e6);
  EXPECT_GT(f.decreases(), 2u);
  EXPECT_GT(net.link().dropped(), 0u);
}

}  // namespace
}  // namespace sqpsim
