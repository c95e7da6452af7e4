#ifndef MPRTC_SIMNET_UNITS_H_
#define MPRTC_SIMNET_UNITS_H_

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

namespace mprtc {

namespace units_internal {
// Round half away from zero; std::llround is not constexpr.
constexpr int64_t RoundToInt(double x) {
  return static_cast<int64_t>(x < 0 ? x - 0.5 : x + 0.5);
}
}  // namespace units_internal

// Signed duration with microsecond resolution.
class TimeDelta {
 public:
  constexpr TimeDelta() = default;

  static constexpr TimeDelta Micros(int64_t us) { return TimeDelta(us); }
  static constexpr TimeDelta Millis(int64_t ms) { return TimeDelta(ms * 1000); }
  static constexpr TimeDelta Seconds(int64_t s) {
    return TimeDelta(s * 1000000);
  }
  static constexpr TimeDelta SecondsF(double s) {
    return TimeDelta(units_internal::RoundToInt(s * 1e6));
  }
  static constexpr TimeDelta Zero() { return TimeDelta(0); }
  static constexpr TimeDelta PlusInfinity() {
    return TimeDelta(std::numeric_limits<int64_t>::max());
  }

  constexpr int64_t us() const { return us_; }
  constexpr double ms() const { return us_ / 1e3; }
  constexpr double seconds() const { return us_ / 1e6; }
  constexpr bool IsInfinite() const {
    return us_ == std::numeric_limits<int64_t>::max();
  }

  constexpr auto operator<=>(const TimeDelta&) const = default;
  constexpr TimeDelta operator+(TimeDelta o) const { return TimeDelta(us_ + o.us_); }
  constexpr TimeDelta operator-(TimeDelta o) const { return TimeDelta(us_ - o.us_); }
  constexpr TimeDelta& operator+=(TimeDelta o) {
    us_ += o.us_;
    return *this;
  }
  constexpr TimeDelta& operator-=(TimeDelta o) {
    us_ -= o.us_;
    return *this;
  }
  constexpr TimeDelta operator*(int64_t k) const { return TimeDelta(us_ * k); }
  constexpr TimeDelta operator*(int k) const { return TimeDelta(us_ * k); }
  // Rounds to the nearest microsecond.
  constexpr TimeDelta operator*(double k) const {
    return TimeDelta(units_internal::RoundToInt(us_ * k));
  }
  constexpr TimeDelta operator/(int64_t k) const { return TimeDelta(us_ / k); }

 private:
  constexpr explicit TimeDelta(int64_t us) : us_(us) {}
  int64_t us_ = 0;
};

// Point on the simulation clock, microseconds since simulation start.
class Timestamp {
 public:
  constexpr Timestamp() = default;

  static constexpr Timestamp Micros(int64_t us) { return Timestamp(us); }
  static constexpr Timestamp Millis(int64_t ms) { return Timestamp(ms * 1000); }
  static constexpr Timestamp Seconds(int64_t s) { return Timestamp(s * 1000000); }
  static constexpr Timestamp Zero() { return Timestamp(0); }
  static constexpr Timestamp PlusInfinity() {
    return Timestamp(std::numeric_limits<int64_t>::max());
  }

  constexpr int64_t us() const { return us_; }
  constexpr double ms() const { return us_ / 1e3; }
  constexpr double seconds() const { return us_ / 1e6; }
  constexpr bool IsInfinite() const {
    return us_ == std::numeric_limits<int64_t>::max();
  }

  constexpr auto operator<=>(const Timestamp&) const = default;
  constexpr Timestamp operator+(TimeDelta d) const {
    return Timestamp(us_ + d.us());
  }
  constexpr Timestamp operator-(TimeDelta d) const {
    return Timestamp(us_ - d.us());
  }
  constexpr TimeDelta operator-(Timestamp o) const {
    return TimeDelta::Micros(us_ - o.us_);
  }
  constexpr Timestamp& operator+=(TimeDelta d) {
    us_ += d.us();
    return *this;
  }

 private:
  constexpr explicit Timestamp(int64_t us) : us_(us) {}
  int64_t us_ = 0;
};

// Bit rate in bits per second.
class DataRate {
 public:
  constexpr DataRate() = default;

  static constexpr DataRate BitsPerSec(int64_t bps) { return DataRate(bps); }
  static constexpr DataRate KilobitsPerSec(int64_t kbps) {
    return DataRate(kbps * 1000);
  }
  static constexpr DataRate MegabitsPerSec(double mbps) {
    return DataRate(units_internal::RoundToInt(mbps * 1e6));
  }
  static constexpr DataRate Zero() { return DataRate(0); }

  // Rate that moves `bytes` in `delta`; zero when delta is not positive.
  static constexpr DataRate FromBytesOver(int64_t bytes, TimeDelta delta) {
    if (delta.us() <= 0) return DataRate(0);
    return DataRate(bytes * 8 * 1000000 / delta.us());
  }

  constexpr int64_t bps() const { return bps_; }
  constexpr double kbps() const { return bps_ / 1e3; }
  constexpr double mbps() const { return bps_ / 1e6; }
  constexpr bool IsZero() const { return bps_ == 0; }

  // Time to move `bytes` at this rate, rounded up to the microsecond.
  constexpr TimeDelta TransferTime(int64_t bytes) const {
    const int64_t bits_us = bytes * 8 * 1000000;
    return TimeDelta::Micros((bits_us + bps_ - 1) / bps_);
  }
  // Bytes moved at this rate over `delta`, rounded down.
  constexpr int64_t BytesOver(TimeDelta delta) const {
    return bps_ * delta.us() / 8 / 1000000;
  }

  constexpr auto operator<=>(const DataRate&) const = default;
  constexpr DataRate operator+(DataRate o) const { return DataRate(bps_ + o.bps_); }
  constexpr DataRate operator-(DataRate o) const { return DataRate(bps_ - o.bps_); }
  constexpr DataRate& operator+=(DataRate o) {
    bps_ += o.bps_;
    return *this;
  }
  // Rounds to the nearest bit per second.
  constexpr DataRate operator*(double k) const {
    return DataRate(units_internal::RoundToInt(bps_ * k));
  }

 private:
  constexpr explicit DataRate(int64_t bps) : bps_(bps) {}
  int64_t bps_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, TimeDelta d) {
  return os << d.us() << "us";
}
inline std::ostream& operator<<(std::ostream& os, Timestamp t) {
  return os << "@" << t.us() << "us";
}
inline std::ostream& operator<<(std::ostream& os, DataRate r) {
  return os << r.bps() << "bps";
}

}  // namespace mprtc

#endif  // MPRTC_SIMNET_UNITS_H_
