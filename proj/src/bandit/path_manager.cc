#include "mprtc/bandit/path_manager.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace mprtc {

PathManager::PathManager(std::vector<int> subflow_ids, std::vector<PathInfo> paths)
    : subflow_ids_(std::move(subflow_ids)) {
  std::set<int> flows(subflow_ids_.begin(), subflow_ids_.end());
  if (flows.size() != subflow_ids_.size())
    throw std::invalid_argument("duplicate subflow id");
  std::set<int> ids;
  for (const PathInfo& p : paths) {
    if (!ids.insert(p.id).second) throw std::invalid_argument("duplicate path id");
    if (!flows.count(p.flowid))
      throw std::invalid_argument("path " + std::to_string(p.id) + " names unknown subflow");
    PathStats s;
    s.id = p.id;
    s.flowid = p.flowid;
    paths_.push_back(std::move(s));
  }
  // Candidates are scanned in ascending id so equal scores favour the lower id.
  std::sort(paths_.begin(), paths_.end(),
            [](const PathStats& a, const PathStats& b) { return a.id < b.id; });
  for (int flow : subflow_ids_) {
    const int count = static_cast<int>(CandidatesOf(flow).size());
    if (count == 0)
      throw std::invalid_argument("subflow " + std::to_string(flow) + " has no path");
    exploration_slots_ = std::max(exploration_slots_, count);
  }
}

size_t PathManager::Index(int path_id) const {
  for (size_t i = 0; i < paths_.size(); ++i) {
    if (paths_[i].id == path_id) return i;
  }
  throw std::out_of_range("unknown path id " + std::to_string(path_id));
}

std::vector<int> PathManager::CandidatesOf(int flowid) const {
  std::vector<int> out;
  for (const PathStats& p : paths_) {
    if (p.flowid == flowid) out.push_back(p.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void PathManager::OnNewBandwidthSample(int path_id, double bw, Timestamp now) {
  PathStats& p = paths_.at(Index(path_id));
  p.bw_samples.push_back({bw, now});
  if (p.samples == 0) {
    p.bw = bw;
    p.max_bw = bw;
    p.bw_hat = bw;
  } else {
    p.bw_hat = (1 - kAlpha) * p.bw_hat + kAlpha * bw;
  }
  if (bw > p.max_bw) p.max_bw = bw;
  DeleteObsoleteSamples(path_id, now);
  p.samples += 1;
}

void PathManager::DeleteObsoleteSamples(int path_id, Timestamp now) {
  PathStats& p = paths_.at(Index(path_id));
  while (p.bw_samples.size() > 1) {
    if (now - p.bw_samples.front().time > kObservedTime) {
      p.bw_samples.pop_front();
    } else {
      break;
    }
  }
  double bw = 0;
  for (const PathStats::Sample& s : p.bw_samples) {
    if (s.bw > bw) bw = s.bw;
  }
  p.bw = bw;
  if (p.bw_samples.empty()) p.bw = p.max_bw;
}

std::vector<int> PathManager::SelectPaths(Timestamp now) {
  for (const PathStats& p : paths_) DeleteObsoleteSamples(p.id, now);

  const int c = C();
  std::vector<int> chosen(subflow_ids_.size(), -1);
  for (int i = 0; i < c; ++i) {
    const int flowid = subflow_ids_[i];
    SelectionRecord rec;
    rec.slot = t_;
    rec.at = now;
    rec.flowid = flowid;
    double x_max = 0;
    int path_id = -1;
    for (const PathStats& p : paths_) {
      if (p.flowid != flowid) continue;
      const double x =
          p.bw_hat + p.bw * std::sqrt(2 * std::log(static_cast<double>(c) *
                                                   static_cast<double>(t_)) /
                                      static_cast<double>(p.n));
      rec.scores.push_back({p.id, x});
      if (x > x_max) {
        x_max = x;
        path_id = p.id;
      }
    }
    chosen[i] = path_id;
    for (PathStats& p : paths_) {
      if (p.id == path_id) p.n = p.n + 1;
    }
    rec.chosen = path_id;
    if (path_id >= 0) {
      const PathStats& p = path(path_id);
      rec.bw = p.bw;
      rec.bw_hat = p.bw_hat;
      rec.n = p.n;
    }
    log_.push_back(std::move(rec));
  }
  t_ = t_ + 1;
  return chosen;
}

std::vector<int> PathManager::ExplorationChoice(int slot) const {
  std::vector<int> out;
  for (int flow : subflow_ids_) {
    const std::vector<int> candidates = CandidatesOf(flow);
    const size_t k = std::min(static_cast<size_t>(slot), candidates.size() - 1);
    out.push_back(candidates[k]);
  }
  return out;
}

std::vector<int> PathManager::NextSlot(Timestamp now) {
  if (slots_done_ >= exploration_slots_) return SelectPaths(now);
  std::vector<int> choice = ExplorationChoice(slots_done_);
  for (size_t i = 0; i < choice.size(); ++i) {
    SelectionRecord rec;
    rec.slot = t_;
    rec.at = now;
    rec.exploration = true;
    rec.flowid = subflow_ids_[i];
    rec.chosen = choice[i];
    const PathStats& p = path(choice[i]);
    rec.bw = p.bw;
    rec.bw_hat = p.bw_hat;
    rec.n = p.n;
    log_.push_back(std::move(rec));
  }
  ++slots_done_;
  return choice;
}

void PathManager::WriteSelectionLog(std::ostream& out) const {
  out << "slot,time_s,phase,subflow,path,score,chosen,bw_bps,bw_hat_bps,n\n";
  char buf[256];
  for (const SelectionRecord& r : log_) {
    const char* phase = r.exploration ? "explore" : "ucb";
    if (r.scores.empty()) {
      std::snprintf(buf, sizeof(buf), "%llu,%.3f,%s,%d,%d,,%d,%.0f,%.0f,%llu\n",
                    static_cast<unsigned long long>(r.slot), r.at.seconds(), phase,
                    r.flowid, r.chosen, r.chosen, r.bw, r.bw_hat,
                    static_cast<unsigned long long>(r.n));
      out << buf;
      continue;
    }
    for (const ScoreRecord& s : r.scores) {
      std::snprintf(buf, sizeof(buf), "%llu,%.3f,%s,%d,%d,%.0f,%d,%.0f,%.0f,%llu\n",
                    static_cast<unsigned long long>(r.slot), r.at.seconds(), phase,
                    r.flowid, s.path, s.score, r.chosen, r.bw, r.bw_hat,
                    static_cast<unsigned long long>(r.n));
      out << buf;
    }
  }
}

}  // namespace mprtc
