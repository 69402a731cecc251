#ifndef SQPSIM_VIDEO_VIDEO_SOURCE_H_
#define SQPSIM_VIDEO_VIDEO_SOURCE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqpsim/sim/packet.h"
#include "sqpsim/sim/random.h"
#include "sqpsim/sim/units.h"

namespace sqpsim::video {

// Interval during which the encoder cannot produce more than `cap_bps`.
struct UndershootEpisode {
  SimTime start;
  SimTime end;
  BitsPerSecond cap_bps = 0;
};

enum class JitterMode {
  kOneSided,   // gap in [I, I + jitter]
  kSymmetric,  // gap in [I - jitter, I + jitter]
};

struct VideoConfig {
  int fps = 60;
  ByteCount mtu = 1200;
  SimTime jitter;
  JitterMode jitter_mode = JitterMode::kOneSided;
  std::vector<UndershootEpisode> undershoot;
  // Frame index -> size multiplier for isolated overshoot frames.
  std::map<FrameId, double> overshoot;

  // Inter-frame interval I rounded to whole microseconds.
  SimTime FrameInterval() const;
  // Two MTU-sized packets per frame.
  BitsPerSecond FloorBps() const;
  std::optional<std::string> Validate() const;
};

struct Frame {
  FrameId frame_id = 0;
  SimTime created_at;
  ByteCount size = 0;
  BitsPerSecond target_at_creation = 0;
  // Size the encoder would have produced without undershoot.
  ByteCount full_size = 0;
};

// Frame generator following an idealized encoder: each frame is sized from
// the target it was created with, unless an undershoot episode caps it or an
// overshoot factor inflates it.
class VideoSource {
 public:
  VideoSource(VideoConfig config, SplitMix64 rng);

  struct Emission {
    Frame frame;
    SimTime next_at;
  };
  Emission NextFrame(BitsPerSecond encoder_target, SimTime now);

  const VideoConfig& config() const { return config_; }

 private:
  ByteCount SizeAt(BitsPerSecond rate) const;

  VideoConfig config_;
  SplitMix64 rng_;
  FrameId next_id_ = 0;
};

// Splits a frame into ceil(size / mtu) packets; the last carries the
// remainder.
std::vector<ByteCount> Packetize(ByteCount size, ByteCount mtu);

}  // namespace sqpsim::video

#endif  // SQPSIM_VIDEO_VIDEO_SOURCE_H_
