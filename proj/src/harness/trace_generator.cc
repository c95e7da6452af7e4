#include "mprtc/harness/trace_generator.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mprtc {

TraceSchedule GenerateSyntheticTrace(std::mt19937_64& rng,
                                     const SyntheticTraceParams& params) {
  if (params.min_mean <= DataRate::Zero() || params.max_mean < params.min_mean)
    throw std::invalid_argument("synthetic trace mean range is empty");
  if (params.min_step <= TimeDelta::Zero() || params.max_step < params.min_step)
    throw std::invalid_argument("synthetic trace step range is empty");
  std::uniform_real_distribution<double> log_mean(
      std::log(static_cast<double>(params.min_mean.bps())),
      std::log(static_cast<double>(params.max_mean.bps())));
  const double mean = std::exp(log_mean(rng));
  std::uniform_int_distribution<int64_t> step_ms(params.min_step.us() / 1000,
                                                 params.max_step.us() / 1000);
  std::normal_distribution<double> noise(0.0, params.sigma);

  std::vector<TraceSchedule::Entry> entries;
  int64_t t_ms = 0;
  const int64_t end_ms = params.length.us() / 1000;
  while (t_ms < end_ms) {
    const double bps = std::clamp(mean * std::exp(noise(rng)), mean / params.spread,
                                  mean * params.spread);
    const int64_t kbps = std::max<int64_t>(1, std::llround(bps / 1000));
    entries.push_back({Timestamp::Millis(t_ms), DataRate::KilobitsPerSec(kbps)});
    t_ms += step_ms(rng);
  }
  return TraceSchedule(std::move(entries), TimeDelta::Millis(std::max(t_ms, end_ms)));
}

std::vector<TraceSchedule> GenerateTracePool(uint64_t pool_seed, int count,
                                             const SyntheticTraceParams& params) {
  if (count < 1) throw std::invalid_argument("trace pool must not be empty");
  std::mt19937_64 rng(pool_seed);
  std::vector<TraceSchedule> pool;
  pool.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) pool.push_back(GenerateSyntheticTrace(rng, params));
  return pool;
}

}  // namespace mprtc
