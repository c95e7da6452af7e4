#ifndef MPRTC_VIDEOMODEL_QUALITY_H_
#define MPRTC_VIDEOMODEL_QUALITY_H_

#include "mprtc/simnet/units.h"

namespace mprtc {

// Rate-distortion model D = theta / (R - R0) + D0. The defaults are
// synthetic and only meaningful for comparing schemes with each other.
struct QualityModelParams {
  double theta = 3.2e6;
  DataRate r0 = DataRate::KilobitsPerSec(50);
  double d0 = 2.0;
};

// Throws std::domain_error when rate <= params.r0.
double Distortion(DataRate rate, const QualityModelParams& params = {});
// PSNR-style proxy 10 log10(255^2 / D); throws std::domain_error for D <= 0.
double QualityScore(double distortion);

}  // namespace mprtc

#endif  // MPRTC_VIDEOMODEL_QUALITY_H_
