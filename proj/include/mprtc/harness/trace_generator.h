#ifndef MPRTC_HARNESS_TRACE_GENERATOR_H_
#define MPRTC_HARNESS_TRACE_GENERATOR_H_

#include <cstdint>
#include <random>
#include <vector>

#include "mprtc/simnet/trace.h"

namespace mprtc {

// Piecewise-constant capacity traces. Each trace draws its mean
// log-uniformly from [min_mean, max_mean]; every step holds a log-normal
// perturbation of that mean for a uniformly drawn duration.
struct SyntheticTraceParams {
  DataRate min_mean = DataRate::KilobitsPerSec(400);
  DataRate max_mean = DataRate::MegabitsPerSec(6);
  TimeDelta length = TimeDelta::Seconds(400);
  TimeDelta min_step = TimeDelta::Seconds(2);
  TimeDelta max_step = TimeDelta::Seconds(10);
  // Standard deviation of the log of a step's capacity around the mean.
  double sigma = 0.3;
  // Step capacities are clamped to [mean / spread, mean * spread].
  double spread = 2.5;
};

inline constexpr uint64_t kDefaultTracePoolSeed = 0x5eed;
inline constexpr int kDefaultTracePoolSize = 100;

TraceSchedule GenerateSyntheticTrace(std::mt19937_64& rng,
                                     const SyntheticTraceParams& params = {});
// A fixed pool, independent of any experiment seed.
std::vector<TraceSchedule> GenerateTracePool(uint64_t pool_seed, int count,
                                             const SyntheticTraceParams& params = {});

}  // namespace mprtc

#endif  // MPRTC_HARNESS_TRACE_GENERATOR_H_
