#include "mprtc/videomodel/rate_controller.h"

#include <algorithm>

namespace mprtc {

DataRate RateController::ReferenceRate(const std::vector<DataRate>& subflow_bw) {
  DataRate sum;
  for (DataRate bw : subflow_bw) sum += bw;
  return std::clamp(sum, kMinRate, kMaxRate);
}

}  // namespace mprtc
