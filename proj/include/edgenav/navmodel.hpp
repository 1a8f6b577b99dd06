#pragma once

#include <cstdint>

#include "edgenav/action.hpp"
#include "edgenav/traces.hpp"

namespace edgenav {

// Ground-truth-plus-degradation stand-in for the onboard/edge vision model.
// Lower resolutions and stronger compression add bias and noise on top of the
// route's ground truth; degradation also grows with local scene difficulty
// (how fast the ground-truth steering angle is changing).

struct DegradationCell {
  double bias = 0;       // radians added to theta
  double noise_theta = 0;  // sigma of theta noise, radians
  double noise_p = 0;      // sigma of collision-probability noise
};

struct DegradationProfile {
  // Rows ordered as kResolutions x kQualities. Local (lossless) execution
  // uses the quality-95 row of its resolution.
  DegradationCell cells[3][3];
  double scene_sensitivity = 1.0;  // noise multiplier slope vs difficulty
  double slope_ref = 1.0;          // rad/s mapped to difficulty 1.0

  static DegradationProfile defaults();
  const DegradationCell& cell(int resolution, int quality) const;
};

struct NavOutput {
  double theta = 0;  // predicted steering angle, radians
  double p = 0;      // predicted collision probability
};

// Scene difficulty in [0, 1]: |d theta_gt / dt| around t, smoothed over
// +-0.5 s and divided by slope_ref.
double scene_difficulty(const Route& route, double t, double slope_ref);

// Model output for the frame nearest t under configuration (resolution,
// quality). quality == kLossless selects the local row. Deterministic in
// (seed, frame, resolution, quality).
NavOutput infer(const Route& route, double t, int resolution, int quality,
                const DegradationProfile& profile, std::uint64_t seed);

}  // namespace edgenav
