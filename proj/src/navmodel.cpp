#include "edgenav/navmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edgenav/errors.hpp"
#include "edgenav/hashrand.hpp"

namespace edgenav {

namespace {

constexpr double kPi = 3.14159265358979323846;

int resolution_row(int resolution) {
  for (std::size_t i = 0; i < kResolutions.size(); ++i)
    if (kResolutions[i] == resolution) return static_cast<int>(i);
  throw ValidationError("unknown resolution " + std::to_string(resolution));
}

int quality_col(int quality) {
  if (quality == kLossless) return 0;  // same degradation as quality 95
  for (std::size_t i = 0; i < kQualities.size(); ++i)
    if (kQualities[i] == quality) return static_cast<int>(i);
  throw ValidationError("unknown quality " + std::to_string(quality));
}

}  // namespace

DegradationProfile DegradationProfile::defaults() {
  DegradationProfile p;
  const double theta_448[3] = {0.02, 0.03, 0.06};  // quality 95, 60, 10
  const double row_offset[3] = {0.0, 0.03, 0.08};  // resolution 448, 224, 112
  for (int r = 0; r < 3; ++r) {
    for (int q = 0; q < 3; ++q) {
      DegradationCell& c = p.cells[r][q];
      c.bias = 0;
      c.noise_theta = theta_448[q] + row_offset[r];
      c.noise_p = c.noise_theta / 2;
    }
  }
  return p;
}

const DegradationCell& DegradationProfile::cell(int resolution, int quality) const {
  return cells[resolution_row(resolution)][quality_col(quality)];
}

double scene_difficulty(const Route& route, double t, double slope_ref) {
  if (slope_ref <= 0) throw ValidationError("slope_ref must be positive");
  const std::size_t i = route.nearest_index(t);
  const std::size_t half = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(0.5 / route.frame_period)));
  const std::size_t lo = i > half ? i - half : 0;
  const std::size_t hi = std::min(i + half, route.frames.size() - 1);
  if (hi == lo) return 0;
  const double slope = (route.frames[hi].theta_gt - route.frames[lo].theta_gt) /
                       (route.frames[hi].time_s - route.frames[lo].time_s);
  return std::min(1.0, std::abs(slope) / slope_ref);
}

NavOutput infer(const Route& route, double t, int resolution, int quality,
                const DegradationProfile& profile, std::uint64_t seed) {
  const DegradationCell& cell = profile.cell(resolution, quality);
  const std::size_t frame = route.nearest_index(t);
  const RouteFrame& gt = route.frames[frame];

  const double difficulty = scene_difficulty(route, t, profile.slope_ref);
  const double scale = 1.0 + profile.scene_sensitivity * difficulty;

  const std::uint64_t key = hash_key(
      seed, frame, static_cast<std::uint64_t>(resolution) << 8 | static_cast<std::uint64_t>(quality));

  NavOutput out;
  out.theta = std::clamp(
      gt.theta_gt + cell.bias + normal01(mix64(key ^ 0x11ULL)) * cell.noise_theta * scale,
      -kPi, kPi);
  out.p = std::clamp(gt.p_gt + normal01(mix64(key ^ 0x22ULL)) * cell.noise_p * scale, 0.0, 1.0);
  return out;
}

}  // namespace edgenav
