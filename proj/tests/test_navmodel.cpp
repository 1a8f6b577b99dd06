#include <doctest.h>

#include <cmath>
#include <vector>

#include "edgenav/errors.hpp"
#include "edgenav/navmodel.hpp"

using namespace edgenav;

namespace {

Route straight_route(double length_s) {
  RouteSpec spec;
  spec.segments = {{SegmentKind::Straight, length_s, 0, 0}};
  spec.noise_scale = 0;
  return generate_route(spec, 1);
}

DegradationProfile zero_noise() {
  DegradationProfile p = DegradationProfile::defaults();
  for (int r = 0; r < 3; ++r)
    for (int q = 0; q < 3; ++q) p.cells[r][q] = DegradationCell{};
  return p;
}

double sigma_over(const Route& route, const DegradationProfile& profile,
                  double t_lo, double t_hi, int resolution, int quality) {
  double sum_sq = 0;
  int n = 0;
  for (double t = t_lo; t <= t_hi; t += route.frame_period) {
    const auto out = infer(route, t, resolution, quality, profile, 99);
    const double err = out.theta - route.nearest(t).theta_gt;
    sum_sq += err * err;
    ++n;
  }
  return std::sqrt(sum_sq / n);
}

}  // namespace

TEST_SUITE("navmodel") {

TEST_CASE("default degradation table") {
  const auto p = DegradationProfile::defaults();
  CHECK(p.cell(448, 95).noise_theta == doctest::Approx(0.02));
  CHECK(p.cell(448, 60).noise_theta == doctest::Approx(0.03));
  CHECK(p.cell(448, 10).noise_theta == doctest::Approx(0.06));
  CHECK(p.cell(224, 95).noise_theta == doctest::Approx(0.05));
  CHECK(p.cell(224, 10).noise_theta == doctest::Approx(0.09));
  CHECK(p.cell(112, 95).noise_theta == doctest::Approx(0.10));
  CHECK(p.cell(112, 10).noise_theta == doctest::Approx(0.14));
  for (int r : kResolutions) {
    for (int q : kQualities) {
      CHECK(p.cell(r, q).bias == 0.0);
      CHECK(p.cell(r, q).noise_p == doctest::Approx(p.cell(r, q).noise_theta / 2));
    }
  }
}

TEST_CASE("degradation grows with lower resolution and stronger compression") {
  const auto p = DegradationProfile::defaults();
  CHECK(p.cell(224, 95).noise_theta > p.cell(448, 95).noise_theta);
  CHECK(p.cell(112, 95).noise_theta > p.cell(224, 95).noise_theta);
  CHECK(p.cell(448, 60).noise_theta > p.cell(448, 95).noise_theta);
  CHECK(p.cell(448, 10).noise_theta > p.cell(448, 60).noise_theta);
}

TEST_CASE("local execution shares the quality-95 degradation") {
  const auto p = DegradationProfile::defaults();
  for (int r : kResolutions) {
    CHECK(p.cell(r, kLossless).noise_theta == p.cell(r, 95).noise_theta);
    CHECK(p.cell(r, kLossless).noise_p == p.cell(r, 95).noise_p);
  }
}

TEST_CASE("unknown configurations are rejected") {
  const auto p = DegradationProfile::defaults();
  CHECK_THROWS_AS(p.cell(300, 95), ValidationError);
  CHECK_THROWS_AS(p.cell(448, 50), ValidationError);
}

TEST_CASE("zero-noise profile reproduces ground truth exactly") {
  const auto route = straight_route(10);
  const auto p = zero_noise();
  for (int r : kResolutions) {
    for (int q : {kLossless, 95, 60, 10}) {
      const auto out = infer(route, 3.0, r, q, p, 17);
      CHECK(out.theta == route.nearest(3.0).theta_gt);
      CHECK(out.p == route.nearest(3.0).p_gt);
    }
  }
}

TEST_CASE("inference draws are keyed by seed, frame and configuration") {
  const auto route = straight_route(10);
  const auto p = DegradationProfile::defaults();
  const auto a = infer(route, 3.0, 448, 95, p, 1);
  const auto b = infer(route, 3.0, 448, 95, p, 1);
  CHECK(a.theta == b.theta);
  CHECK(a.p == b.p);
  CHECK(infer(route, 3.0, 448, 95, p, 2).theta != a.theta);
  CHECK(infer(route, 3.05, 448, 95, p, 1).theta != a.theta);
  CHECK(infer(route, 3.0, 224, 95, p, 1).theta != a.theta);
  CHECK(infer(route, 3.0, 448, 60, p, 1).theta != a.theta);
}

TEST_CASE("scene difficulty follows the ground-truth slope") {
  RouteSpec spec;
  spec.segments = {{SegmentKind::Straight, 5, 0, 0},
                   {SegmentKind::Turn, 20, 2.0, 0},
                   {SegmentKind::Straight, 5, 0, 0}};
  spec.noise_scale = 0;
  const auto route = generate_route(spec, 1);
  CHECK(scene_difficulty(route, 2.5, 1.0) == doctest::Approx(0.0));
  // Mid-ramp slope of the turn is 2.0 / 10 = 0.2 rad/s.
  CHECK(scene_difficulty(route, 10.0, 1.0) == doctest::Approx(0.2));
  CHECK(scene_difficulty(route, 10.0, 0.4) == doctest::Approx(0.5));
  CHECK(scene_difficulty(route, 10.0, 0.1) == doctest::Approx(1.0));  // clamped
  CHECK_THROWS_AS(scene_difficulty(route, 10.0, 0.0), ValidationError);
}

TEST_CASE("noise scales with scene difficulty") {
  RouteSpec spec;
  spec.segments = {{SegmentKind::Straight, 20, 0, 0},
                   {SegmentKind::Turn, 40, 2.0, 0}};
  spec.noise_scale = 0;
  const auto route = generate_route(spec, 1);
  auto p = DegradationProfile::defaults();
  p.scene_sensitivity = 1.0;
  p.slope_ref = 0.05;  // the 0.1 rad/s ramp saturates difficulty at 1
  const double s_flat = sigma_over(route, p, 1.0, 19.0, 448, 95);
  const double s_turn = sigma_over(route, p, 21.0, 39.0, 448, 95);
  CHECK(s_flat == doctest::Approx(0.02).epsilon(0.15));
  CHECK(s_turn == doctest::Approx(0.04).epsilon(0.15));

  p.scene_sensitivity = 0.0;
  CHECK(sigma_over(route, p, 21.0, 39.0, 448, 95) == doctest::Approx(0.02).epsilon(0.15));
}

TEST_CASE("outputs are clamped to valid ranges") {
  const auto route = straight_route(20);
  auto p = DegradationProfile::defaults();
  for (int r = 0; r < 3; ++r)
    for (int q = 0; q < 3; ++q) p.cells[r][q] = {0, 40.0, 20.0};
  for (double t = 0; t <= 20; t += 0.1) {
    const auto out = infer(route, t, 448, 95, p, 3);
    CHECK(std::abs(out.theta) <= 3.14159265358979323846);
    CHECK(out.p >= 0.0);
    CHECK(out.p <= 1.0);
  }
}

}  // TEST_SUITE
