#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace edgenav {

// Bandwidth traces are (time_s, bandwidth_kbps) samples, strictly increasing
// in time, sampled at 1 Hz by the generators and held stepwise in between.

struct BandwidthSample {
  double time_s = 0;
  double kbps = 0;
};

struct BandwidthTrace {
  std::vector<BandwidthSample> samples;

  double start_time() const { return samples.front().time_s; }
  double end_time() const { return samples.back().time_s; }
};

// Step-hold lookup: value of the last sample at or before t. Holds the final
// value past the end of the trace. t before the first sample is an error.
double sample_bandwidth(const BandwidthTrace& trace, double t);

BandwidthTrace load_bandwidth_trace(const std::string& path);
void save_bandwidth_trace(const BandwidthTrace& trace, const std::string& path);

enum class BandwidthKind { MarkovLevels, RandomWalk };

struct BandwidthGenSpec {
  BandwidthKind kind = BandwidthKind::MarkovLevels;
  double duration_s = 200.0;
  double sample_period_s = 1.0;
  std::vector<double> levels{1000, 3000, 8000};  // markov-levels states, kbps
  double stay_prob = 0.9;                        // per-sample keep probability
  double walk_start = 4000;                      // random-walk initial kbps
  double walk_step = 200;                        // random-walk per-sample sigma
  double clamp_min = 50;
  double clamp_max = 54000;
};

BandwidthTrace generate_bandwidth(const BandwidthGenSpec& spec, std::uint64_t seed);

// Routes are dense per-frame ground truth: steering angle theta_gt (radians,
// relative to current heading) and collision probability p_gt in [0, 1].

struct RouteFrame {
  double time_s = 0;
  double theta_gt = 0;
  double p_gt = 0;
};

struct Route {
  double frame_period = 0.05;
  std::vector<RouteFrame> frames;

  double duration() const;
  // Index of the frame nearest to t (ties round up). t outside [0, duration]
  // is an error.
  std::size_t nearest_index(double t) const;
  const RouteFrame& nearest(double t) const { return frames[nearest_index(t)]; }
};

enum class SegmentKind { Straight, Turn, Curve };

struct RouteSegment {
  SegmentKind kind = SegmentKind::Straight;
  double length_s = 10.0;
  double magnitude_rad = 0;  // turn peak angle or curve amplitude
  double period_s = 8.0;     // curve oscillation period
};

struct RouteSpec {
  std::vector<RouteSegment> segments;
  double frame_period = 0.05;
  double noise_scale = 0.01;  // additive zero-mean theta noise, radians
  // Collision probability model: p = p_base + p_turn * min(1, |theta|/theta_ref).
  double p_base = 0.05;
  double p_turn = 0.35;
  double theta_ref = 1.5;
};

Route generate_route(const RouteSpec& spec, std::uint64_t seed);

Route load_route(const std::string& path);
void save_route(const Route& route, const std::string& path);

}  // namespace edgenav
