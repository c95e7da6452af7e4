#ifndef MPRTC_HARNESS_EXPERIMENTS_H_
#define MPRTC_HARNESS_EXPERIMENTS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mprtc/harness/experiment_config.h"
#include "mprtc/harness/metrics.h"
#include "mprtc/harness/multipath_session.h"

namespace mprtc {

struct FlowMetrics {
  int flow = 0;
  Timestamp start;
  // Received payload over the flow's active time.
  DataRate throughput;
  double mean_owd_ms = 0;
  double loss_rate = 0;
  uint64_t packets_sent = 0;
  uint64_t packets_dropped = 0;
  RateSeries rate;
};

struct ExperimentResult {
  ExperimentSpec spec;
  // dumbbell / rtt.
  std::vector<FlowMetrics> flows;
  double aggregate_loss = 0;
  double mean_owd_ms = 0;
  // Jain index of the flows' mean rates over [max(last start, T/2), T).
  double jain = 1;
  // rtt: x2 / x1.
  double ratio = 0;
  std::optional<MultipathResult> multipath;
  // Output file name -> CSV contents.
  std::map<std::string, std::string> files;
};

// Throws ConfigError/TopologyError for unknown cases and missing traces.
ExperimentResult RunExperiment(const ExperimentSpec& spec);

// Four traces drawn from the pool with the run's generator.
std::vector<TraceSchedule> DrawTraces(const ExperimentSpec& spec, std::mt19937_64& rng);

// Writes every entry of result.files into `dir`, creating it if needed.
void WriteOutputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace mprtc

#endif  // MPRTC_HARNESS_EXPERIMENTS_H_
