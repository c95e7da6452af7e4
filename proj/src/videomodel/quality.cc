#include "mprtc/videomodel/quality.h"

#include <cmath>
#include <stdexcept>

namespace mprtc {

double Distortion(DataRate rate, const QualityModelParams& params) {
  if (rate <= params.r0) throw std::domain_error("encoding rate at or below R0");
  return params.theta / static_cast<double>(rate.bps() - params.r0.bps()) + params.d0;
}

double QualityScore(double distortion) {
  if (distortion <= 0) throw std::domain_error("distortion must be positive");
  return 10.0 * std::log10(255.0 * 255.0 / distortion);
}

}  // namespace mprtc
