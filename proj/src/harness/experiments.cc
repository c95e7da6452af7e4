#include "mprtc/harness/experiments.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "mprtc/harness/bulk_flow.h"
#include "mprtc/simnet/topology.h"

namespace mprtc {

namespace {

class MetricsWriter {
 public:
  MetricsWriter() {
    out_ << std::setprecision(10);
    out_ << "scope,metric,value\n";
  }
  template <typename T>
  void Add(const std::string& scope, const std::string& metric, T value) {
    out_ << scope << ',' << metric << ',' << value << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

void RunBulkFamily(const ExperimentSpec& spec, ExperimentResult& result) {
  std::mt19937_64 rng(spec.seed);
  EventLoop loop;
  TopologyConfig topo;
  topo.kind = spec.family == Family::kDumbbell ? TopologyKind::kDumbbell
                                               : TopologyKind::kRttUnfairness;
  topo.case_id = spec.case_id;
  topo.overrides = spec.links;
  std::vector<Timestamp> starts = spec.flow_starts;
  if (starts.empty()) {
    if (spec.family == Family::kDumbbell) {
      starts = {Timestamp::Seconds(0), Timestamp::Seconds(40), Timestamp::Seconds(80)};
    } else {
      starts = {Timestamp::Zero(), Timestamp::Zero()};
    }
  }
  if (spec.family == Family::kRtt && starts.size() != 2)
    throw ConfigError("rtt-unfairness runs exactly two flows");
  topo.flows = static_cast<int>(starts.size());
  std::unique_ptr<Network> net = BuildTopology(topo, &loop, rng);

  std::vector<std::unique_ptr<BulkFlow>> flows;
  for (size_t i = 0; i < starts.size(); ++i) {
    BulkFlowConfig fc;
    fc.flow_id = static_cast<uint32_t>(i + 1);
    fc.route = FlowRouteName(static_cast<int>(i));
    fc.variant = spec.variant;
    fc.start = starts[i];
    fc.max_rate = spec.app_rate_cap;
    fc.record_cc_trace = spec.record_cc_trace;
    flows.push_back(std::make_unique<BulkFlow>(&loop, net.get(), fc, &rng));
    flows.back()->Start();
  }
  const Timestamp end = Timestamp::Zero() + spec.duration;
  loop.RunUntil(end);

  uint64_t sent = 0, dropped = 0;
  Timestamp window_start = Timestamp::Zero() + spec.duration / 2;
  for (const Timestamp& s : starts) window_start = std::max(window_start, s);
  std::vector<double> window_rates;
  MetricsWriter metrics;
  std::ostringstream rates;
  rates << "time_s,series,rate_bps\n";
  for (size_t i = 0; i < flows.size(); ++i) {
    const BulkFlow& f = *flows[i];
    const PathConnection::Stats& st = f.connection().stats();
    FlowMetrics m;
    m.flow = static_cast<int>(i);
    m.start = starts[i];
    m.rate = f.received();
    m.rate.PadTo(end);
    const TimeDelta active = end - std::min(starts[i], end);
    m.throughput = active > TimeDelta::Zero()
                       ? DataRate::FromBytesOver(st.payload_bytes_received, active)
                       : DataRate::Zero();
    m.mean_owd_ms = st.owd_count ? st.owd_sum_ms / static_cast<double>(st.owd_count) : 0.0;
    m.packets_sent = st.packets_sent;
    m.packets_dropped = net->DropsForFlow(f.config().flow_id);
    m.loss_rate = m.packets_sent ? static_cast<double>(m.packets_dropped) /
                                       static_cast<double>(m.packets_sent)
                                 : 0.0;
    sent += m.packets_sent;
    dropped += m.packets_dropped;
    window_rates.push_back(static_cast<double>(m.rate.MeanRate(window_start, end).bps()));

    const std::string scope = "flow" + std::to_string(i);
    metrics.Add(scope, "start_s", m.start.seconds());
    metrics.Add(scope, "throughput_bps", m.throughput.bps());
    metrics.Add(scope, "mean_owd_ms", m.mean_owd_ms);
    metrics.Add(scope, "loss_rate", m.loss_rate);
    metrics.Add(scope, "packets_sent", m.packets_sent);
    metrics.Add(scope, "packets_dropped", m.packets_dropped);
    for (size_t b = 0; b < m.rate.bins(); ++b)
      rates << b << ',' << scope << ',' << m.rate.RateOfBin(b).bps() << '\n';
    result.flows.push_back(std::move(m));
  }
  double owd_sum = 0;
  uint64_t owd_count = 0;
  for (const auto& f : flows) {
    owd_sum += f->connection().stats().owd_sum_ms;
    owd_count += f->connection().stats().owd_count;
  }
  result.mean_owd_ms = owd_count ? owd_sum / static_cast<double>(owd_count) : 0.0;
  result.aggregate_loss = sent ? static_cast<double>(dropped) / static_cast<double>(sent) : 0.0;
  result.jain = JainIndex(window_rates);
  metrics.Add("all", "loss_rate", result.aggregate_loss);
  metrics.Add("all", "mean_owd_ms", result.mean_owd_ms);
  metrics.Add("all", "jain_window_start_s", window_start.seconds());
  metrics.Add("all", "jain", result.jain);
  if (spec.family == Family::kRtt) {
    const double x1 = static_cast<double>(result.flows[0].throughput.bps());
    const double x2 = static_cast<double>(result.flows[1].throughput.bps());
    result.ratio = x1 > 0 ? x2 / x1 : 0.0;
    metrics.Add("all", "ratio", result.ratio);
  }
  result.files["metrics.csv"] = metrics.str();
  result.files["rates.csv"] = rates.str();
  // No path choice and no video on a single-path family; keep the file set
  // uniform so tooling can rely on it.
  result.files["selections.csv"] = "slot,time_s,scheme,subflow,path,switched,score\n";
  result.files["frames.csv"] =
      "frame_index,capture_ts_ms,delivered_ts_ms,size,key,dropped_at_sender,abandoned\n";
  if (spec.record_cc_trace) {
    std::ostringstream cc;
    cc << "connection," << BbrController::TraceHeader() << '\n';
    for (const auto& f : flows) {
      for (const std::string& line : f->connection().cc_trace())
        cc << f->config().route << ',' << line << '\n';
    }
    result.files["cc_trace.csv"] = cc.str();
  }
}

void RunMultipathFamily(const ExperimentSpec& spec, ExperimentResult& result) {
  std::mt19937_64 rng(spec.seed);
  EventLoop loop;
  TopologyConfig topo;
  topo.kind = TopologyKind::kMultipathOverlay;
  topo.subflows = spec.subflows;
  topo.paths_per_subflow = spec.paths_per_subflow;
  topo.overrides = spec.links;
  topo.path_traces = DrawTraces(spec, rng);
  std::unique_ptr<Network> net = BuildTopology(topo, &loop, rng);

  MultipathConfig mc;
  mc.scheme = spec.scheme;
  mc.variant = spec.variant;
  mc.duration = spec.duration;
  mc.subflows = spec.subflows;
  mc.paths_per_subflow = spec.paths_per_subflow;
  mc.log_decisions = spec.log_decisions;
  mc.record_cc_trace = spec.record_cc_trace;
  MultipathSession session(&loop, net.get(), mc, &rng);
  session.Start();
  loop.RunUntil(Timestamp::Zero() + spec.duration);
  session.Finish();

  const MultipathResult r = session.Result();
  MetricsWriter metrics;
  metrics.Add("session", "throughput_bps", r.throughput.bps());
  metrics.Add("session", "mean_distortion", r.mean_distortion);
  metrics.Add("session", "mean_quality", r.mean_quality);
  metrics.Add("session", "mean_frame_delay_ms", r.mean_frame_delay_ms);
  metrics.Add("session", "mean_owd_ms", r.mean_owd_ms);
  metrics.Add("session", "loss_rate", r.loss_rate);
  metrics.Add("session", "frames_captured", r.frames_captured);
  metrics.Add("session", "frames_dropped_at_sender", r.frames_dropped_at_sender);
  metrics.Add("session", "frames_delivered", r.frames_delivered);
  metrics.Add("session", "frames_abandoned", r.frames_abandoned);
  metrics.Add("session", "path_switches", r.path_switches);
  metrics.Add("session", "retransmissions", r.retransmissions);
  metrics.Add("session", "key_age_evictions", r.key_age_evictions);
  metrics.Add("session", "max_nonkey_retx_age_ms", r.max_nonkey_retx_age.ms());
  for (int s = 0; s < spec.subflows; ++s) {
    for (int p = 0; p < spec.paths_per_subflow; ++p) {
      const std::string route = PathRouteName(s, p);
      metrics.Add(route, "mean_capacity_bps",
                  net->MeanBottleneck(route, Timestamp::Zero(),
                                      Timestamp::Zero() + spec.duration)
                      .bps());
      metrics.Add(route, "owd_ms", net->PropagationDelay(route).ms());
    }
  }
  result.multipath = r;
  result.files["metrics.csv"] = metrics.str();
  std::ostringstream rates, selections, frames;
  session.WriteRates(rates);
  session.WriteSelections(selections);
  session.WriteFrames(frames);
  result.files["rates.csv"] = rates.str();
  result.files["selections.csv"] = selections.str();
  result.files["frames.csv"] = frames.str();
  if (spec.scheme == PathScheme::kUcb) {
    std::ostringstream bandit;
    session.path_manager().WriteSelectionLog(bandit);
    result.files["bandit.csv"] = bandit.str();
  }
  if (spec.log_decisions) {
    std::ostringstream d;
    session.scheduler().WriteDecisionLog(d);
    result.files["decisions.csv"] = d.str();
  }
  if (spec.record_cc_trace) {
    std::ostringstream cc;
    session.WriteCcTrace(cc);
    result.files["cc_trace.csv"] = cc.str();
  }
}

}  // namespace

std::vector<TraceSchedule> DrawTraces(const ExperimentSpec& spec, std::mt19937_64& rng) {
  const size_t needed = static_cast<size_t>(spec.subflows * spec.paths_per_subflow);
  std::vector<TraceSchedule> out;
  if (!spec.trace_files.empty()) {
    if (spec.trace_files.size() != needed)
      throw ConfigError("multipath needs " + std::to_string(needed) + " traces, got " +
                        std::to_string(spec.trace_files.size()));
    for (const std::string& path : spec.trace_files) out.push_back(LoadTrace(path));
    return out;
  }
  if (spec.trace_pool_size < static_cast<int>(needed))
    throw ConfigError("trace pool smaller than the number of paths");
  const std::vector<TraceSchedule> pool =
      GenerateTracePool(spec.trace_pool_seed, spec.trace_pool_size);
  std::vector<size_t> idx(pool.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  // Partial Fisher-Yates: the first `needed` slots hold a uniform draw
  // without replacement.
  for (size_t i = 0; i < needed; ++i) {
    std::uniform_int_distribution<size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
    out.push_back(pool[idx[i]]);
  }
  return out;
}

ExperimentResult RunExperiment(const ExperimentSpec& spec) {
  if (spec.duration <= TimeDelta::Zero()) throw ConfigError("duration must be positive");
  ExperimentResult result;
  result.spec = spec;
  if (spec.family == Family::kMultipath) {
    RunMultipathFamily(spec, result);
  } else {
    RunBulkFamily(spec, result);
  }
  return result;
}

void WriteOutputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, contents] : result.files) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << contents;
  }
}

}  // namespace mprtc
