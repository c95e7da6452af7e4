#ifndef MPRTC_SIMNET_TOPOLOGY_H_
#define MPRTC_SIMNET_TOPOLOGY_H_

#include <array>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mprtc/simnet/network.h"
#include "mprtc/simnet/trace.h"

namespace mprtc {

class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TopologyKind { kDumbbell, kRttUnfairness, kMultipathOverlay };

// Parses "dumbbell", "rtt-unfairness" (alias "rtt"), "multipath-overlay"
// (alias "multipath"). Throws TopologyError otherwise.
TopologyKind ParseTopologyKind(const std::string& name);
std::string ToString(TopologyKind kind);

// Per-link parameter override applied after the preset is built.
struct LinkOverride {
  std::string name;
  std::optional<DataRate> capacity;
  std::optional<TimeDelta> owd;
  std::optional<TimeDelta> queue_time;
  std::optional<int64_t> queue_bytes;
};

struct TopologyConfig {
  TopologyKind kind = TopologyKind::kDumbbell;
  // Table row for the dumbbell (1-12) and rtt-unfairness (1-3) presets.
  int case_id = 1;
  // Number of sender/receiver pairs sharing the dumbbell bottleneck.
  int flows = 3;
  std::vector<LinkOverride> overrides;

  // multipath-overlay: subflows x paths_per_subflow candidate routes. Path 0
  // of each subflow is the direct route; the others cross a relay.
  int subflows = 2;
  int paths_per_subflow = 2;
  // Bottleneck capacity per candidate route, indexed subflow-major.
  std::vector<TraceSchedule> path_traces;
  TimeDelta min_path_delay = TimeDelta::Millis(50);
  TimeDelta max_path_delay = TimeDelta::Millis(100);
  // Queue of trace-driven links, sized at the trace's mean capacity.
  TimeDelta path_queue_time = TimeDelta::Millis(200);
};

// Table-driven presets.
LinkConfig DumbbellBottleneck(int case_id);
std::array<LinkConfig, 5> RttUnfairnessLinks(int case_id);

// Route names produced by the presets:
//   dumbbell, rtt-unfairness: "flow<i>" and reverse "flow<i>.rev"
//   multipath-overlay:        "s<i>.p<j>" and reverse "s<i>.p<j>.rev"
std::string FlowRouteName(int flow);
std::string PathRouteName(int subflow, int path);
std::string ReverseRouteName(const std::string& forward);

// Builds the named preset. Stochastic draws (multipath path delays) come
// from `rng`. Throws TopologyError on unknown cases or missing parameters.
std::unique_ptr<Network> BuildTopology(const TopologyConfig& config,
                                       EventLoop* loop, std::mt19937_64& rng);

}  // namespace mprtc

#endif  // MPRTC_SIMNET_TOPOLOGY_H_
