// Command-line runner for the dumbbell, RTT-unfairness and multipath
// experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mprtc/harness/experiments.h"
#include "mprtc/harness/trace_generator.h"

namespace {

using mprtc::ExperimentSpec;

void PrintSummary(const mprtc::ExperimentResult& r) {
  const ExperimentSpec& s = r.spec;
  std::printf("%s case=%d algo=%s seed=%llu", mprtc::ToString(s.family).c_str(), s.case_id,
              mprtc::ToString(s.variant).c_str(), static_cast<unsigned long long>(s.seed));
  if (r.multipath) {
    const mprtc::MultipathResult& m = *r.multipath;
    std::printf(" scheme=%s throughput=%.0fkbps distortion=%.3f frames=%llu/%llu\n",
                mprtc::ToString(s.scheme).c_str(), m.throughput.kbps(), m.mean_distortion,
                static_cast<unsigned long long>(m.frames_delivered),
                static_cast<unsigned long long>(m.frames_captured));
    return;
  }
  std::printf(" loss=%.4f owd=%.1fms jain=%.3f", r.aggregate_loss, r.mean_owd_ms, r.jain);
  if (s.family == mprtc::Family::kRtt) std::printf(" R=%.3f", r.ratio);
  std::printf("\n");
  for (const auto& f : r.flows) {
    std::printf("  flow%d start=%.0fs x=%.0fkbps owd=%.1fms loss=%.4f\n", f.flow,
                f.start.seconds(), f.throughput.kbps(), f.mean_owd_ms, f.loss_rate);
  }
}

std::vector<std::string> Split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipath real-time video transport simulator"};
  app.require_subcommand(1);

  // run
  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  std::string family = "dumbbell", algo = "rtc-bbr", scheme = "ucb", config_path, out_dir;
  int case_id = 1;
  uint64_t seed = 1;
  double duration = 0;
  std::vector<std::string> traces;
  bool cc_trace = false, decision_log = false;
  run->add_option("--family", family, "dumbbell | rtt | multipath");
  run->add_option("--case", case_id, "Table case id");
  run->add_option("--algo", algo, "rtc-bbr | bbr");
  run->add_option("--scheme", scheme, "ucb | default | oracle (multipath)");
  run->add_option("--seed", seed, "Random seed");
  run->add_option("--duration", duration, "Simulated seconds (default per family)");
  run->add_option("--config", config_path, "JSON experiment config; overrides the flags");
  run->add_option("--trace", traces, "ms,kbps trace file per candidate path (multipath)");
  run->add_flag("--cc-trace", cc_trace, "Write cc_trace.csv");
  run->add_flag("--decision-log", decision_log, "Write decisions.csv (multipath)");
  run->add_option("--out", out_dir, "Output directory")->required();

  // batch
  CLI::App* batch = app.add_subcommand("batch", "Run a seed batch of multipath sessions");
  int seeds = 30;
  uint64_t first_seed = 1;
  std::string schemes = "default,ucb,oracle", batch_out, batch_algo = "rtc-bbr";
  double batch_duration = 400;
  batch->add_option("--seeds", seeds, "Number of seeds");
  batch->add_option("--first-seed", first_seed, "First seed");
  batch->add_option("--schemes", schemes, "Comma-separated schemes");
  batch->add_option("--algo", batch_algo, "rtc-bbr | bbr");
  batch->add_option("--duration", batch_duration, "Simulated seconds");
  batch->add_option("--out", batch_out, "Output directory")->required();

  // trace-gen
  CLI::App* gen = app.add_subcommand("trace-gen", "Write the synthetic trace pool");
  int count = mprtc::kDefaultTracePoolSize;
  uint64_t pool_seed = mprtc::kDefaultTracePoolSeed;
  std::string gen_out;
  gen->add_option("--count", count, "Number of traces");
  gen->add_option("--seed", pool_seed, "Pool seed");
  gen->add_option("--out", gen_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentSpec spec;
      if (!config_path.empty()) {
        spec = mprtc::LoadExperimentConfig(config_path);
      } else {
        spec.family = mprtc::ParseFamily(family);
        spec.case_id = case_id;
        spec.variant = mprtc::ParseCcVariant(algo);
        spec.scheme = mprtc::ParsePathScheme(scheme);
        spec.seed = seed;
        spec.duration = mprtc::DefaultDuration(spec.family);
        spec.trace_files = traces;
      }
      if (duration > 0) spec.duration = mprtc::TimeDelta::SecondsF(duration);
      spec.record_cc_trace = cc_trace;
      spec.log_decisions = decision_log;
      const mprtc::ExperimentResult r = mprtc::RunExperiment(spec);
      mprtc::WriteOutputs(r, out_dir);
      PrintSummary(r);
    } else if (*batch) {
      std::filesystem::create_directories(batch_out);
      std::ofstream summary(std::filesystem::path(batch_out) / "summary.csv");
      summary << "seed,scheme,throughput_bps,mean_distortion,mean_quality,frames_delivered,"
                 "frames_captured,path_switches\n";
      for (int i = 0; i < seeds; ++i) {
        for (const std::string& sc : Split(schemes)) {
          ExperimentSpec spec;
          spec.family = mprtc::Family::kMultipath;
          spec.variant = mprtc::ParseCcVariant(batch_algo);
          spec.scheme = mprtc::ParsePathScheme(sc);
          spec.seed = first_seed + static_cast<uint64_t>(i);
          spec.duration = mprtc::TimeDelta::SecondsF(batch_duration);
          const mprtc::ExperimentResult r = mprtc::RunExperiment(spec);
          const mprtc::MultipathResult& m = *r.multipath;
          summary << spec.seed << ',' << sc << ',' << m.throughput.bps() << ','
                  << m.mean_distortion << ',' << m.mean_quality << ',' << m.frames_delivered
                  << ',' << m.frames_captured << ',' << m.path_switches << '\n';
          PrintSummary(r);
        }
      }
    } else if (*gen) {
      std::filesystem::create_directories(gen_out);
      const auto pool = mprtc::GenerateTracePool(pool_seed, count);
      for (size_t i = 0; i < pool.size(); ++i) {
        std::ofstream out(std::filesystem::path(gen_out) / ("trace_" + std::to_string(i) + ".txt"));
        mprtc::WriteTrace(out, pool[i]);
      }
      std::printf("wrote %zu traces to %s\n", pool.size(), gen_out.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
