#include "mprtc/harness/metrics.h"

#include <stdexcept>

namespace mprtc {

void RateSeries::Add(Timestamp t, int64_t bytes) {
  const size_t bin = static_cast<size_t>(t.us() / bin_.us());
  if (bin >= bytes_.size()) bytes_.resize(bin + 1, 0);
  bytes_[bin] += bytes;
  total_ += bytes;
}

void RateSeries::PadTo(Timestamp end) {
  const size_t bins = static_cast<size_t>(end.us() / bin_.us());
  if (bins > bytes_.size()) bytes_.resize(bins, 0);
}

DataRate RateSeries::RateOfBin(size_t i) const {
  if (i >= bytes_.size()) return DataRate::Zero();
  return DataRate::FromBytesOver(bytes_[i], bin_);
}

DataRate RateSeries::MeanRate(Timestamp from, Timestamp to) const {
  const int64_t first = (from.us() + bin_.us() - 1) / bin_.us();
  const int64_t last = to.us() / bin_.us();
  if (last <= first) return DataRate::Zero();
  int64_t bytes = 0;
  for (int64_t i = first; i < last && i < static_cast<int64_t>(bytes_.size()); ++i)
    bytes += bytes_[i];
  return DataRate::FromBytesOver(bytes, bin_ * (last - first));
}

double JainIndex(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("Jain index of an empty allocation");
  double sum = 0;
  double sq = 0;
  for (double v : x) {
    if (v < 0) throw std::invalid_argument("Jain index of a negative allocation");
    sum += v;
    sq += v * v;
  }
  if (sq == 0) return 1.0;
  return sum * sum / (static_cast<double>(x.size()) * sq);
}

}  // namespace mprtc
