#ifndef MPRTC_HARNESS_METRICS_H_
#define MPRTC_HARNESS_METRICS_H_

#include <cstdint>
#include <vector>

#include "mprtc/simnet/units.h"

namespace mprtc {

// Bytes received per fixed-width time bin.
class RateSeries {
 public:
  explicit RateSeries(TimeDelta bin = TimeDelta::Seconds(1)) : bin_(bin) {}

  void Add(Timestamp t, int64_t bytes);
  // Extends the series with empty bins up to `end`.
  void PadTo(Timestamp end);

  size_t bins() const { return bytes_.size(); }
  TimeDelta bin_width() const { return bin_; }
  DataRate RateOfBin(size_t i) const;
  // Mean rate over the whole bins in [from, to).
  DataRate MeanRate(Timestamp from, Timestamp to) const;
  int64_t total_bytes() const { return total_; }

 private:
  TimeDelta bin_;
  std::vector<int64_t> bytes_;
  int64_t total_ = 0;
};

// (sum x)^2 / (n * sum x^2). Equal allocations, including all zero, give 1.
// Throws std::invalid_argument for an empty input or a negative value.
double JainIndex(const std::vector<double>& x);

// Running mean.
class MeanAccumulator {
 public:
  void Add(double v) {
    sum_ += v;
    ++count_;
  }
  double mean() const { return count_ ? sum_ / static_cast<double>(count_) : 0.0; }
  uint64_t count() const { return count_; }
  double sum() const { return sum_; }

 private:
  double sum_ = 0;
  uint64_t count_ = 0;
};

}  // namespace mprtc

#endif  // MPRTC_HARNESS_METRICS_H_
