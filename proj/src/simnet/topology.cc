#include "mprtc/simnet/topology.h"

#include <algorithm>
#include <map>

namespace mprtc {

namespace {

// Edge links in the dumbbell: fast enough never to bottleneck.
constexpr DataRate kAccessCapacity = DataRate::MegabitsPerSec(100);
constexpr TimeDelta kAccessDelay = TimeDelta::Millis(1);
constexpr int64_t kAccessQueueBytes = 4 * 1000 * 1000;
// Relay hops and reverse (acknowledgement) direction of trace-driven paths.
constexpr DataRate kRelayCapacity = DataRate::MegabitsPerSec(100);
constexpr DataRate kReverseCapacity = DataRate::MegabitsPerSec(10);
constexpr int64_t kMinTraceQueueBytes = 30 * 1000;

struct Table1Row {
  int64_t mbps;
  int64_t owd_ms;
  int64_t queue_ms;
};
constexpr std::array<Table1Row, 12> kTable1 = {{
    {3, 50, 100}, {3, 50, 150}, {3, 50, 200},
    {5, 50, 100}, {5, 50, 150}, {5, 50, 200},
    {6, 50, 150}, {6, 50, 200},
    {8, 50, 150}, {8, 50, 200},
    {10, 50, 150}, {10, 50, 200},
}};

// (BW Mbps, OWD ms, Q ms) for L0..L4.
using Table2Row = std::array<Table1Row, 5>;
constexpr std::array<Table2Row, 3> kTable2 = {{
    {{{10, 10, 200}, {4, 10, 200}, {10, 10, 200}, {10, 20, 200}, {10, 30, 200}}},
    {{{10, 10, 200}, {4, 10, 200}, {10, 10, 200}, {10, 10, 200}, {10, 30, 200}}},
    {{{10, 20, 200}, {4, 10, 200}, {10, 10, 200}, {10, 10, 200}, {10, 30, 200}}},
}};

LinkConfig FromRow(const Table1Row& row) {
  return LinkConfig::WithQueueTime(DataRate::MegabitsPerSec(row.mbps),
                                   TimeDelta::Millis(row.owd_ms),
                                   TimeDelta::Millis(row.queue_ms));
}

class Builder {
 public:
  Builder(const TopologyConfig& config, EventLoop* loop)
      : net_(std::make_unique<Network>(loop)) {
    for (const auto& o : config.overrides) overrides_[o.name] = o;
  }

  // Adds `name` and its reverse "<name>.rev" with the same parameters.
  std::pair<LinkId, LinkId> AddDuplex(const std::string& name, LinkConfig cfg) {
    cfg = Apply(name, cfg);
    const LinkId fwd = net_->AddLink(name, cfg);
    const LinkId rev = net_->AddLink(name + ".rev", cfg);
    return {fwd, rev};
  }

  LinkConfig Apply(const std::string& name, LinkConfig cfg) {
    auto it = overrides_.find(name);
    if (it == overrides_.end()) return cfg;
    const LinkOverride& o = it->second;
    used_.push_back(name);
    if (o.capacity) cfg.capacity = *o.capacity;
    if (o.owd) cfg.owd = *o.owd;
    if (o.queue_time) cfg.queue_capacity_bytes = cfg.capacity.BytesOver(*o.queue_time);
    if (o.queue_bytes) cfg.queue_capacity_bytes = *o.queue_bytes;
    return cfg;
  }

  void CheckOverridesUsed() const {
    for (const auto& [name, o] : overrides_) {
      if (std::find(used_.begin(), used_.end(), name) == used_.end())
        throw TopologyError("override names unknown link " + name);
    }
  }

  Network& net() { return *net_; }
  std::unique_ptr<Network> Finish() {
    CheckOverridesUsed();
    return std::move(net_);
  }

 private:
  std::unique_ptr<Network> net_;
  std::map<std::string, LinkOverride> overrides_;
  std::vector<std::string> used_;
};

std::unique_ptr<Network> BuildDumbbell(const TopologyConfig& config,
                                       EventLoop* loop) {
  if (config.flows < 1) throw TopologyError("dumbbell needs at least one flow");
  Builder b(config, loop);
  const LinkConfig access{kAccessCapacity, kAccessDelay, kAccessQueueBytes};
  auto [l1, l1_rev] = b.AddDuplex("L1", DumbbellBottleneck(config.case_id));
  for (int i = 0; i < config.flows; ++i) {
    const std::string n = std::to_string(i);
    auto [a, a_rev] = b.AddDuplex("a" + n, access);
    auto [e, e_rev] = b.AddDuplex("e" + n, access);
    b.net().AddRoute(FlowRouteName(i), {a, l1, e});
    b.net().AddRoute(ReverseRouteName(FlowRouteName(i)), {e_rev, l1_rev, a_rev});
  }
  return b.Finish();
}

std::unique_ptr<Network> BuildRttUnfairness(const TopologyConfig& config,
                                            EventLoop* loop) {
  Builder b(config, loop);
  const auto links = RttUnfairnessLinks(config.case_id);
  std::array<std::pair<LinkId, LinkId>, 5> ids;
  for (int i = 0; i < 5; ++i) ids[i] = b.AddDuplex("L" + std::to_string(i), links[i]);
  // path1: n0 -L0- n2 -L1- n3 -L3- n4 ; path2: n1 -L2- n2 -L1- n3 -L4- n5
  b.net().AddRoute(FlowRouteName(0), {ids[0].first, ids[1].first, ids[3].first});
  b.net().AddRoute(ReverseRouteName(FlowRouteName(0)),
                   {ids[3].second, ids[1].second, ids[0].second});
  b.net().AddRoute(FlowRouteName(1), {ids[2].first, ids[1].first, ids[4].first});
  b.net().AddRoute(ReverseRouteName(FlowRouteName(1)),
                   {ids[4].second, ids[1].second, ids[2].second});
  return b.Finish();
}

std::unique_ptr<Network> BuildMultipathOverlay(const TopologyConfig& config,
                                               EventLoop* loop,
                                               std::mt19937_64& rng) {
  const int n_routes = config.subflows * config.paths_per_subflow;
  if (config.subflows < 1 || config.paths_per_subflow < 1)
    throw TopologyError("multipath-overlay needs subflows and paths");
  if (static_cast<int>(config.path_traces.size()) != n_routes)
    throw TopologyError("multipath-overlay needs " + std::to_string(n_routes) +
                        " path traces, got " +
                        std::to_string(config.path_traces.size()));
  if (config.max_path_delay < config.min_path_delay)
    throw TopologyError("max path delay below min path delay");
  Builder b(config, loop);
  std::uniform_int_distribution<int64_t> delay_us(config.min_path_delay.us(),
                                                  config.max_path_delay.us());
  for (int s = 0; s < config.subflows; ++s) {
    for (int p = 0; p < config.paths_per_subflow; ++p) {
      const TraceSchedule& trace = config.path_traces[s * config.paths_per_subflow + p];
      const TimeDelta owd = TimeDelta::Micros(delay_us(rng));
      const std::string route = PathRouteName(s, p);
      const DataRate mean = trace.is_constant()
                                ? trace.CapacityAt(Timestamp::Zero())
                                : trace.MeanCapacity(Timestamp::Zero(),
                                                     Timestamp::Zero() + trace.period());
      const int64_t queue = std::max(kMinTraceQueueBytes,
                                     mean.BytesOver(config.path_queue_time));
      if (p == 0) {
        LinkConfig cfg = b.Apply(route, LinkConfig{mean, owd, queue});
        const LinkId fwd = b.net().AddLink(route, cfg, trace);
        const LinkId rev = b.net().AddLink(
            route + ".rev", LinkConfig{kReverseCapacity, cfg.owd, kAccessQueueBytes});
        b.net().AddRoute(route, {fwd});
        b.net().AddRoute(ReverseRouteName(route), {rev});
      } else {
        // Access hop carries the trace; the relay hop adds the rest of the
        // route's delay.
        const TimeDelta first = owd / 2;
        const TimeDelta second = owd - first;
        LinkConfig acc = b.Apply(route + ".access", LinkConfig{mean, first, queue});
        LinkConfig rel = b.Apply(route + ".relay",
                                 LinkConfig{kRelayCapacity, second, kAccessQueueBytes});
        const LinkId acc_fwd = b.net().AddLink(route + ".access", acc, trace);
        const LinkId rel_fwd = b.net().AddLink(route + ".relay", rel);
        const LinkId rel_rev = b.net().AddLink(
            route + ".relay.rev", LinkConfig{kReverseCapacity, rel.owd, kAccessQueueBytes});
        const LinkId acc_rev = b.net().AddLink(
            route + ".access.rev", LinkConfig{kReverseCapacity, acc.owd, kAccessQueueBytes});
        b.net().AddRoute(route, {acc_fwd, rel_fwd});
        b.net().AddRoute(ReverseRouteName(route), {rel_rev, acc_rev});
      }
    }
  }
  return b.Finish();
}

}  // namespace

TopologyKind ParseTopologyKind(const std::string& name) {
  if (name == "dumbbell") return TopologyKind::kDumbbell;
  if (name == "rtt-unfairness" || name == "rtt") return TopologyKind::kRttUnfairness;
  if (name == "multipath-overlay" || name == "multipath")
    return TopologyKind::kMultipathOverlay;
  throw TopologyError("unknown topology '" + name + "'");
}

std::string ToString(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kDumbbell:
      return "dumbbell";
    case TopologyKind::kRttUnfairness:
      return "rtt-unfairness";
    case TopologyKind::kMultipathOverlay:
      return "multipath-overlay";
  }
  return "?";
}

LinkConfig DumbbellBottleneck(int case_id) {
  if (case_id < 1 || case_id > static_cast<int>(kTable1.size()))
    throw TopologyError("dumbbell case must be 1-12, got " + std::to_string(case_id));
  return FromRow(kTable1[case_id - 1]);
}

std::array<LinkConfig, 5> RttUnfairnessLinks(int case_id) {
  if (case_id < 1 || case_id > static_cast<int>(kTable2.size()))
    throw TopologyError("rtt-unfairness case must be 1-3, got " +
                        std::to_string(case_id));
  std::array<LinkConfig, 5> out;
  for (int i = 0; i < 5; ++i) out[i] = FromRow(kTable2[case_id - 1][i]);
  return out;
}

std::string FlowRouteName(int flow) { return "flow" + std::to_string(flow); }

std::string PathRouteName(int subflow, int path) {
  return "s" + std::to_string(subflow) + ".p" + std::to_string(path);
}

std::string ReverseRouteName(const std::string& forward) {
  return forward + ".rev";
}

std::unique_ptr<Network> BuildTopology(const TopologyConfig& config,
                                       EventLoop* loop, std::mt19937_64& rng) {
  switch (config.kind) {
    case TopologyKind::kDumbbell:
      return BuildDumbbell(config, loop);
    case TopologyKind::kRttUnfairness:
      return BuildRttUnfairness(config, loop);
    case TopologyKind::kMultipathOverlay:
      return BuildMultipathOverlay(config, loop, rng);
  }
  throw TopologyError("unknown topology");
}

}  // namespace mprtc
