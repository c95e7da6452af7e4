#ifndef MPRTC_VIDEOMODEL_RATE_CONTROLLER_H_
#define MPRTC_VIDEOMODEL_RATE_CONTROLLER_H_

#include <vector>

#include "mprtc/simnet/units.h"

namespace mprtc {

// Reference encoder rate: the sum of the exploited paths' bandwidth
// estimates, clamped to [kMinRate, kMaxRate]. Recomputed every kInterval.
class RateController {
 public:
  static constexpr TimeDelta kInterval = TimeDelta::Millis(50);
  static constexpr DataRate kMinRate = DataRate::KilobitsPerSec(50);
  static constexpr DataRate kMaxRate = DataRate::MegabitsPerSec(4);

  static DataRate ReferenceRate(const std::vector<DataRate>& subflow_bw);

  DataRate OnTick(const std::vector<DataRate>& subflow_bw) {
    target_ = ReferenceRate(subflow_bw);
    return target_;
  }
  DataRate target() const { return target_; }

 private:
  DataRate target_ = kMinRate;
};

}  // namespace mprtc

#endif  // MPRTC_VIDEOMODEL_RATE_CONTROLLER_H_
