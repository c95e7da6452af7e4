#include "mprtc/harness/experiment_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mprtc {

namespace {

using nlohmann::json;

void CheckKeys(const json& obj, const std::set<std::string>& allowed,
               const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double Number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (d < 0) throw ConfigError(where + "." + key + " must not be negative");
  return d;
}

LinkOverride ParseLink(const json& j, size_t i) {
  const std::string where = "links[" + std::to_string(i) + "]";
  CheckKeys(j, {"name", "capacity_kbps", "owd_ms", "queue_ms", "queue_bytes"}, where);
  if (!j.contains("name") || !j["name"].is_string())
    throw ConfigError(where + " needs a string name");
  LinkOverride o;
  o.name = j["name"].get<std::string>();
  if (j.contains("capacity_kbps")) {
    const double kbps = Number(j, "capacity_kbps", where);
    if (kbps <= 0) throw ConfigError(where + ".capacity_kbps must be positive");
    o.capacity = DataRate::BitsPerSec(static_cast<int64_t>(kbps * 1000));
  }
  if (j.contains("owd_ms"))
    o.owd = TimeDelta::Micros(static_cast<int64_t>(Number(j, "owd_ms", where) * 1000));
  if (j.contains("queue_ms"))
    o.queue_time = TimeDelta::Micros(static_cast<int64_t>(Number(j, "queue_ms", where) * 1000));
  if (j.contains("queue_bytes"))
    o.queue_bytes = static_cast<int64_t>(Number(j, "queue_bytes", where));
  return o;
}

}  // namespace

Family ParseFamily(const std::string& name) {
  if (name == "dumbbell") return Family::kDumbbell;
  if (name == "rtt" || name == "rtt-unfairness") return Family::kRtt;
  if (name == "multipath" || name == "multipath-overlay") return Family::kMultipath;
  throw ConfigError("unknown experiment family '" + name + "'");
}

std::string ToString(Family family) {
  switch (family) {
    case Family::kDumbbell:
      return "dumbbell";
    case Family::kRtt:
      return "rtt";
    case Family::kMultipath:
      return "multipath";
  }
  return "?";
}

TimeDelta DefaultDuration(Family family) {
  return family == Family::kRtt ? TimeDelta::Seconds(300) : TimeDelta::Seconds(400);
}

ExperimentSpec ParseExperimentJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  CheckKeys(j,
            {"topology", "case", "seed", "duration_s", "algorithm", "links", "flows",
             "app_cap_kbps", "scheme", "traces", "trace_pool_size", "trace_pool_seed"},
            "config");
  if (!j.contains("topology") || !j["topology"].is_string())
    throw ConfigError("config needs a string 'topology'");
  ExperimentSpec spec;
  try {
    spec.family = ParseFamily(j["topology"].get<std::string>());
    spec.duration = DefaultDuration(spec.family);
    if (j.contains("case")) spec.case_id = j["case"].get<int>();
    if (j.contains("seed")) spec.seed = j["seed"].get<uint64_t>();
    if (j.contains("duration_s")) {
      const double d = Number(j, "duration_s", "config");
      if (d <= 0) throw ConfigError("duration_s must be positive");
      spec.duration = TimeDelta::Micros(static_cast<int64_t>(d * 1e6));
    }
    if (j.contains("algorithm")) spec.variant = ParseCcVariant(j["algorithm"].get<std::string>());
    if (j.contains("scheme")) spec.scheme = ParsePathScheme(j["scheme"].get<std::string>());
    if (j.contains("links")) {
      if (!j["links"].is_array()) throw ConfigError("links must be an array");
      for (size_t i = 0; i < j["links"].size(); ++i) spec.links.push_back(ParseLink(j["links"][i], i));
    }
    if (j.contains("flows")) {
      if (!j["flows"].is_array()) throw ConfigError("flows must be an array");
      for (size_t i = 0; i < j["flows"].size(); ++i) {
        const json& f = j["flows"][i];
        const std::string where = "flows[" + std::to_string(i) + "]";
        CheckKeys(f, {"start_s"}, where);
        const double start = f.contains("start_s") ? Number(f, "start_s", where) : 0.0;
        spec.flow_starts.push_back(Timestamp::Micros(static_cast<int64_t>(start * 1e6)));
      }
    }
    if (j.contains("app_cap_kbps"))
      spec.app_rate_cap =
          DataRate::BitsPerSec(static_cast<int64_t>(Number(j, "app_cap_kbps", "config") * 1000));
    if (j.contains("traces")) spec.trace_files = j["traces"].get<std::vector<std::string>>();
    if (j.contains("trace_pool_size")) spec.trace_pool_size = j["trace_pool_size"].get<int>();
    if (j.contains("trace_pool_seed")) spec.trace_pool_seed = j["trace_pool_seed"].get<uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

ExperimentSpec LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseExperimentJson(ss.str());
}

}  // namespace mprtc
