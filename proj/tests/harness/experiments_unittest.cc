#include "mprtc/harness/experiments.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

namespace mprtc {
namespace {

namespace fs = std::filesystem;

ExperimentSpec Short(Family family, TimeDelta duration) {
  ExperimentSpec s;
  s.family = family;
  s.duration = duration;
  s.seed = 3;
  return s;
}

TEST(ExperimentsTest, DumbbellIsDeterministic) {
  ExperimentSpec s = Short(Family::kDumbbell, TimeDelta::Seconds(20));
  s.flow_starts = {Timestamp::Zero(), Timestamp::Seconds(5)};
  s.record_cc_trace = true;
  const ExperimentResult a = RunExperiment(s);
  const ExperimentResult b = RunExperiment(s);
  EXPECT_EQ(a.files, b.files);
  for (const char* name : {"metrics.csv", "rates.csv", "selections.csv", "frames.csv",
                           "cc_trace.csv"})
    EXPECT_TRUE(a.files.count(name)) << name;
  ASSERT_EQ(a.flows.size(), 2u);
  EXPECT_GT(a.jain, 0.5);
  EXPECT_LE(a.jain, 1.0);
  // Two flows cannot exceed the 3 Mbps bottleneck.
  EXPECT_LE(a.flows[0].rate.MeanRate(Timestamp::Seconds(10), Timestamp::Seconds(20)).bps() +
                a.flows[1].rate.MeanRate(Timestamp::Seconds(10), Timestamp::Seconds(20)).bps(),
            3000000);
}

TEST(ExperimentsTest, SeedChangesOutcome) {
  ExperimentSpec s = Short(Family::kMultipath, TimeDelta::Seconds(15));
  const ExperimentResult a = RunExperiment(s);
  s.seed = 4;
  const ExperimentResult b = RunExperiment(s);
  EXPECT_NE(a.files.at("metrics.csv"), b.files.at("metrics.csv"));
}

TEST(ExperimentsTest, RttRatio) {
  const ExperimentResult r = RunExperiment(Short(Family::kRtt, TimeDelta::Seconds(20)));
  ASSERT_EQ(r.flows.size(), 2u);
  ASSERT_GT(r.flows[0].throughput.bps(), 0);
  EXPECT_DOUBLE_EQ(r.ratio, static_cast<double>(r.flows[1].throughput.bps()) /
                                static_cast<double>(r.flows[0].throughput.bps()));
  ExperimentSpec bad = Short(Family::kRtt, TimeDelta::Seconds(1));
  bad.flow_starts = {Timestamp::Zero()};
  EXPECT_THROW(RunExperiment(bad), ConfigError);
}

TEST(ExperimentsTest, MultipathIsDeterministicAndComplete) {
  ExperimentSpec s = Short(Family::kMultipath, TimeDelta::Seconds(20));
  s.log_decisions = true;
  const ExperimentResult a = RunExperiment(s);
  const ExperimentResult b = RunExperiment(s);
  EXPECT_EQ(a.files, b.files);
  for (const char* name : {"metrics.csv", "rates.csv", "selections.csv", "frames.csv",
                           "bandit.csv", "decisions.csv"})
    EXPECT_TRUE(a.files.count(name)) << name;
  ASSERT_TRUE(a.multipath.has_value());
  const MultipathResult& m = *a.multipath;
  EXPECT_EQ(m.frames_captured, 600u);
  EXPECT_GT(m.frames_delivered, 0u);
  EXPECT_GT(m.throughput.bps(), 0);
  EXPECT_EQ(m.key_age_evictions, 0u);
  EXPECT_LE(m.max_nonkey_retx_age, TimeDelta::Millis(400));
}

TEST(ExperimentsTest, DrawTracesIsSeeded) {
  ExperimentSpec s = Short(Family::kMultipath, TimeDelta::Seconds(1));
  std::mt19937_64 r1(5), r2(5);
  const auto a = DrawTraces(s, r1);
  const auto b = DrawTraces(s, r2);
  ASSERT_EQ(a.size(), 4u);
  for (size_t i = 0; i < a.size(); ++i) {
    std::ostringstream x, y;
    WriteTrace(x, a[i]);
    WriteTrace(y, b[i]);
    EXPECT_EQ(x.str(), y.str());
  }
  s.trace_files = {"one.trace"};
  EXPECT_THROW(DrawTraces(s, r1), ConfigError);
  s.trace_files.clear();
  s.trace_pool_size = 3;
  EXPECT_THROW(DrawTraces(s, r1), ConfigError);
}

TEST(ExperimentsTest, ExplicitTraceFiles) {
  const fs::path dir = fs::path(::testing::TempDir()) / "mprtc_traces";
  fs::create_directories(dir);
  ExperimentSpec s = Short(Family::kMultipath, TimeDelta::Seconds(10));
  for (int i = 0; i < 4; ++i) {
    const fs::path p = dir / ("p" + std::to_string(i) + ".trace");
    std::ofstream(p) << "0," << 1000 * (i + 1) << "\n5000," << 500 * (i + 1) << "\n";
    s.trace_files.push_back(p.string());
  }
  const ExperimentResult r = RunExperiment(s);
  // Traces cap each path: 1, 2, 3 and 4 Mbps for the first five seconds.
  ASSERT_TRUE(r.multipath.has_value());
  EXPECT_GT(r.multipath->throughput.bps(), 0);
  EXPECT_LE(r.multipath->throughput.bps(), 4000000 + 6000000);
  s.trace_files.back() = (dir / "missing.trace").string();
  EXPECT_THROW(RunExperiment(s), TraceParseError);
}

TEST(ExperimentsTest, UnknownCaseThrows) {
  ExperimentSpec s = Short(Family::kDumbbell, TimeDelta::Seconds(1));
  s.case_id = 13;
  EXPECT_THROW(RunExperiment(s), std::invalid_argument);
  s.duration = TimeDelta::Zero();
  EXPECT_THROW(RunExperiment(s), ConfigError);
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string(MPRTC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

// Two CLI runs with the same arguments write byte-identical files.
TEST(CliTest, RunIsReproducible) {
  const fs::path base = fs::path(::testing::TempDir()) / "mprtc_cli";
  fs::remove_all(base);
  for (const char* family : {"dumbbell", "multipath"}) {
    const std::string common = std::string("run --family ") + family +
                               " --case 1 --algo rtc-bbr --scheme ucb --seed 7 --duration 12";
    const fs::path a = base / (std::string(family) + "_a");
    const fs::path b = base / (std::string(family) + "_b");
    ASSERT_EQ(RunCli(common + " --out " + a.string()), 0);
    ASSERT_EQ(RunCli(common + " --out " + b.string()), 0);
    for (const char* name : {"metrics.csv", "rates.csv", "selections.csv", "frames.csv"}) {
      ASSERT_TRUE(fs::exists(a / name)) << family << "/" << name;
      EXPECT_EQ(Slurp(a / name), Slurp(b / name)) << family << "/" << name;
    }
  }
}

TEST(CliTest, ConfigFileAndErrors) {
  const fs::path base = fs::path(::testing::TempDir()) / "mprtc_cli_cfg";
  fs::remove_all(base);
  fs::create_directories(base);
  std::ofstream(base / "exp.json") << R"({"topology": "rtt", "case": 2, "duration_s": 5,
                                          "algorithm": "bbr"})";
  ASSERT_EQ(RunCli("run --config " + (base / "exp.json").string() + " --cc-trace --out " +
                   (base / "out").string()),
            0);
  EXPECT_TRUE(fs::exists(base / "out" / "cc_trace.csv"));
  EXPECT_NE(Slurp(base / "out" / "cc_trace.csv").find("ProbeBW"), std::string::npos);
  std::ofstream(base / "bad.json") << R"({"topology": "rtt", "bogus": 1})";
  EXPECT_NE(RunCli("run --config " + (base / "bad.json").string() + " --out " +
                   (base / "x").string()),
            0);
  EXPECT_NE(RunCli("run --family ring --out " + (base / "y").string()), 0);
}

}  // namespace
}  // namespace mprtc
