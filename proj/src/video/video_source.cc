#include "sqpsim/video/video_source.h"

#include <algorithm>
#include <cmath>

#include "sqpsim/sim/check.h"

namespace sqpsim::video {

SimTime VideoConfig::FrameInterval() const {
  return SimTime::FromSeconds(1.0 / fps);
}

BitsPerSecond VideoConfig::FloorBps() const {
  return 2.0 * static_cast<double>(mtu) * 8.0 * fps;
}

std::optional<std::string> VideoConfig::Validate() const {
  if (fps <= 0) return "fps must be positive";
  if (mtu <= 0) return "mtu must be positive";
  if (jitter < SimTime::Zero()) return "jitter must be non-negative";
  if (jitter >= FrameInterval()) return "jitter must be below the frame interval";
  for (const auto& e : undershoot) {
    if (e.end <= e.start) return "undershoot episode must have end > start";
    if (!(e.cap_bps > 0)) return "undershoot cap must be positive";
  }
  for (const auto& [id, factor] : overshoot) {
    if (id < 0 || !(factor > 0)) return "overshoot entries need id >= 0 and factor > 0";
  }
  return std::nullopt;
}

VideoSource::VideoSource(VideoConfig config, SplitMix64 rng)
    : config_(std::move(config)), rng_(rng) {
  const auto err = config_.Validate();
  SQPSIM_CHECK(!err, err ? err->c_str() : "");
}

ByteCount VideoSource::SizeAt(BitsPerSecond rate) const {
  return static_cast<ByteCount>(
      std::llround(rate / (8.0 * static_cast<double>(config_.fps))));
}

VideoSource::Emission VideoSource::NextFrame(BitsPerSecond encoder_target,
                                             SimTime now) {
  Frame f;
  f.frame_id = next_id_++;
  f.created_at = now;
  f.target_at_creation = encoder_target;
  f.full_size = SizeAt(encoder_target);
  f.size = f.full_size;
  for (const auto& e : config_.undershoot) {
    if (now >= e.start && now < e.end && e.cap_bps < encoder_target) {
      f.size = SizeAt(e.cap_bps);
    }
  }
  if (const auto it = config_.overshoot.find(f.frame_id);
      it != config_.overshoot.end()) {
    f.size = static_cast<ByteCount>(
        std::llround(static_cast<double>(f.size) * it->second));
  }
  f.size = std::max<ByteCount>(f.size, 1);
  f.full_size = std::max(f.full_size, f.size);

  SimTime gap = config_.FrameInterval();
  const int64_t j = config_.jitter.us();
  if (j > 0) {
    if (config_.jitter_mode == JitterMode::kOneSided) {
      gap += SimTime::Micros(
          static_cast<int64_t>(rng_.UniformInclusive(static_cast<uint64_t>(j))));
    } else {
      gap += SimTime::Micros(static_cast<int64_t>(rng_.UniformInclusive(
                                 static_cast<uint64_t>(2 * j))) -
                             j);
    }
  }
  return Emission{f, now + gap};
}

std::vector<ByteCount> Packetize(ByteCount size, ByteCount mtu) {
  SQPSIM_CHECK(size > 0 && mtu > 0, "bad packetization input");
  std::vector<ByteCount> out(static_cast<size_t>((size + mtu - 1) / mtu), mtu);
  out.back() = size - mtu * static_cast<ByteCount>(out.size() - 1);
  return out;
}

}  // namespace sqpsim::video
