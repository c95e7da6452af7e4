#ifndef MPRTC_HARNESS_EXPERIMENT_CONFIG_H_
#define MPRTC_HARNESS_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mprtc/congestion/bbr_controller.h"
#include "mprtc/harness/multipath_session.h"
#include "mprtc/harness/trace_generator.h"
#include "mprtc/simnet/topology.h"

namespace mprtc {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Family { kDumbbell, kRtt, kMultipath };

// Parses "dumbbell", "rtt" (alias "rtt-unfairness"), "multipath" (alias
// "multipath-overlay"). Throws ConfigError otherwise.
Family ParseFamily(const std::string& name);
std::string ToString(Family family);

struct ExperimentSpec {
  Family family = Family::kDumbbell;
  int case_id = 1;
  CcVariant variant = CcVariant::kRtcBbr;
  PathScheme scheme = PathScheme::kUcb;
  uint64_t seed = 1;
  TimeDelta duration = TimeDelta::Seconds(400);
  std::vector<LinkOverride> links;

  // dumbbell / rtt: one start time per flow. Empty selects the family
  // default ({0, 40, 80} s and {0, 0} s).
  std::vector<Timestamp> flow_starts;
  DataRate app_rate_cap = DataRate::MegabitsPerSec(4);

  // multipath: explicit traces (subflows x paths, subflow-major) or, when
  // empty, a draw from the synthetic pool.
  std::vector<std::string> trace_files;
  int trace_pool_size = kDefaultTracePoolSize;
  uint64_t trace_pool_seed = kDefaultTracePoolSeed;
  int subflows = 2;
  int paths_per_subflow = 2;

  bool record_cc_trace = false;
  bool log_decisions = false;
};

// Family defaults: 400 s, except 300 s for rtt.
TimeDelta DefaultDuration(Family family);

// JSON document:
//   { "topology": "dumbbell" | "rtt-unfairness" | "multipath-overlay",
//     "case": 1, "seed": 1, "duration_s": 400, "algorithm": "rtc-bbr",
//     "links": [{"name": "L1", "capacity_kbps": 3000, "owd_ms": 50,
//                "queue_ms": 100, "queue_bytes": 37500}],
//     "flows": [{"start_s": 0}, {"start_s": 40}],
//     "app_cap_kbps": 4000,
//     "scheme": "ucb", "traces": ["a.trace", ...],
//     "trace_pool_size": 100, "trace_pool_seed": 24301 }
// Every key except "topology" is optional. Unknown keys are rejected.
ExperimentSpec ParseExperimentJson(const std::string& text);
ExperimentSpec LoadExperimentConfig(const std::string& path);

}  // namespace mprtc

#endif  // MPRTC_HARNESS_EXPERIMENT_CONFIG_H_
