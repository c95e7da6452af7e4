#ifndef MPRTC_BANDIT_PATH_MANAGER_H_
#define MPRTC_BANDIT_PATH_MANAGER_H_

#include <cstdint>
#include <deque>
#include <ostream>
#include <string>
#include <vector>

#include "mprtc/simnet/units.h"

namespace mprtc {

// Per-candidate-path reward state. Bandwidths are bits per second.
struct PathStats {
  struct Sample {
    double bw;
    Timestamp time;
  };

  int id = 0;
  int flowid = 0;
  // Largest sample within the observation window.
  double bw = 0;
  // Exponentially smoothed reward.
  double bw_hat = 0;
  uint64_t n = 1;
  double max_bw = 0;
  uint64_t samples = 0;
  std::deque<Sample> bw_samples;
};

// UCB path selection. Every decision slot each subflow picks the candidate
// maximizing bw_hat + bw * sqrt(2 ln(C*T) / N), C being the number of
// subflows. Before UCB takes over, an exploration phase uses every candidate
// of every subflow for one slot, in ascending path id.
class PathManager {
 public:
  static constexpr double kAlpha = 0.9;
  static constexpr TimeDelta kObservedTime = TimeDelta::Seconds(10);

  struct PathInfo {
    int id;
    int flowid;
  };

  struct ScoreRecord {
    int path;
    double score;
  };
  struct SelectionRecord {
    uint64_t slot = 0;
    Timestamp at;
    bool exploration = false;
    int flowid = 0;
    std::vector<ScoreRecord> scores;
    int chosen = -1;
    // Chosen path's state after the round.
    double bw = 0;
    double bw_hat = 0;
    uint64_t n = 0;
  };

  // Throws std::invalid_argument for duplicate ids, paths naming an unknown
  // subflow, or a subflow without candidates.
  PathManager(std::vector<int> subflow_ids, std::vector<PathInfo> paths);

  void OnNewBandwidthSample(int path_id, double bw, Timestamp now);
  void DeleteObsoleteSamples(int path_id, Timestamp now);

  // One UCB round over all subflows: prunes every candidate's samples, picks
  // per subflow, bumps the chosen N and then T. Entry i of the result is the
  // path for subflow_ids[i]; -1 if no candidate scored above zero.
  std::vector<int> SelectPaths(Timestamp now);

  // Number of exploration slots: the largest candidate count of any subflow.
  int exploration_slots() const { return exploration_slots_; }
  // Path used by each subflow in exploration slot `slot` (0-based). Subflows
  // with fewer candidates stay on their last one.
  std::vector<int> ExplorationChoice(int slot) const;

  // Exploration slots first, UCB afterwards.
  std::vector<int> NextSlot(Timestamp now);

  uint64_t T() const { return t_; }
  int C() const { return static_cast<int>(subflow_ids_.size()); }
  const std::vector<int>& subflow_ids() const { return subflow_ids_; }
  const PathStats& path(int path_id) const { return paths_.at(Index(path_id)); }
  const std::vector<PathStats>& paths() const { return paths_; }
  std::vector<int> CandidatesOf(int flowid) const;

  const std::vector<SelectionRecord>& log() const { return log_; }
  // "slot,time_s,phase,subflow,path,score,chosen,bw_bps,bw_hat_bps,n"
  void WriteSelectionLog(std::ostream& out) const;

 private:
  size_t Index(int path_id) const;

  std::vector<int> subflow_ids_;
  std::vector<PathStats> paths_;
  uint64_t t_ = 1;
  int exploration_slots_ = 0;
  int slots_done_ = 0;
  std::vector<SelectionRecord> log_;
};

}  // namespace mprtc

#endif  // MPRTC_BANDIT_PATH_MANAGER_H_
