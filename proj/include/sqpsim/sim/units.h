#ifndef SQPSIM_SIM_UNITS_H_
#define SQPSIM_SIM_UNITS_H_

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>

namespace sqpsim {

// Simulation clock value in integer microseconds. Used both for instants
// (time since simulation start) and for spans between them.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime Micros(int64_t us) { return SimTime(us); }
  static constexpr SimTime Millis(int64_t ms) { return SimTime(ms * 1000); }
  static constexpr SimTime Seconds(int64_t s) { return SimTime(s * 1000000); }
  // Rounds half-up to the nearest microsecond.
  static SimTime FromSeconds(double s) {
    return SimTime(static_cast<int64_t>(std::floor(s * 1e6 + 0.5)));
  }
  static constexpr SimTime Zero() { return SimTime(0); }
  static constexpr SimTime Max() {
    return SimTime(std::numeric_limits<int64_t>::max());
  }

  constexpr int64_t us() const { return us_; }
  constexpr double ms() const { return static_cast<double>(us_) / 1e3; }
  constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime o) const { return SimTime(us_ + o.us_); }
  constexpr SimTime operator-(SimTime o) const { return SimTime(us_ - o.us_); }
  constexpr SimTime& operator+=(SimTime o) {
    us_ += o.us_;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    us_ -= o.us_;
    return *this;
  }
  constexpr SimTime operator*(int64_t k) const { return SimTime(us_ * k); }
  // Scales and rounds half-up.
  SimTime Scaled(double k) const {
    return SimTime(
        static_cast<int64_t>(std::floor(static_cast<double>(us_) * k + 0.5)));
  }

 private:
  constexpr explicit SimTime(int64_t us) : us_(us) {}
  int64_t us_ = 0;
};

// Byte counts are plain integers; rates are bits per second.
using ByteCount = int64_t;
using BitsPerSecond = double;

inline constexpr BitsPerSecond Mbps(double v) { return v * 1e6; }
inline constexpr BitsPerSecond Kbps(double v) { return v * 1e3; }

// Time to put `bytes` on a wire of integer capacity, rounded half-up.
constexpr SimTime SerializationTime(ByteCount bytes, int64_t capacity_bps) {
  const int64_t bits_us = bytes * 8 * 1000000;
  return SimTime::Micros((2 * bits_us + capacity_bps) / (2 * capacity_bps));
}

// Same for a fractional rate (pacing).
inline SimTime TransmitTime(ByteCount bytes, BitsPerSecond rate_bps) {
  return SimTime::FromSeconds(static_cast<double>(bytes) * 8.0 / rate_bps);
}

// Average rate of `bytes` over `span`.
inline BitsPerSecond RateOver(ByteCount bytes, SimTime span) {
  return static_cast<double>(bytes) * 8.0 / span.seconds();
}

}  // namespace sqpsim

#endif  // SQPSIM_SIM_UNITS_H_
