#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "edgenav/eie.hpp"
#include "edgenav/latency.hpp"
#include "edgenav/metrics.hpp"
#include "edgenav/navmodel.hpp"
#include "edgenav/traces.hpp"

namespace edgenav {

// Normalization caps for the scheduler observation. Fixed per deployment so a
// trained policy reads absolute bandwidths and core grants the same way in
// every run.
struct ObsCaps {
  double c_cap = 1.0;
  double d_cap = 0.5;
  double b_cap = 12000;  // kbps
  double s_cap = 12;     // virtual cores
};

struct SchedulerState {
  double c = 0;  // scene complexity
  double d = 0;  // scene dynamics
  double b = 0;  // current bandwidth, kbps
  double s = 0;  // granted edge cores
  // Latest raw model outputs, kept for the encoder-off ablation.
  double raw_theta = 0;
  double raw_p = 0;
};

// Encoded observation <c, d, b, s>, each scaled by its cap and clamped to [0, 1].
std::array<double, 4> observe_encoded(const SchedulerState& st, const ObsCaps& caps);
// Raw observation <theta, p, b, s> for the encoder-off ablation.
std::array<double, 4> observe_raw(const SchedulerState& st, const ObsCaps& caps);

struct EnvConfig {
  double tau_s = 5.0;             // decision window the configuration is held for
  double episode_length_s = 100.0;
  double epsilon = 0.13;          // QoN success threshold, radians
  CrashRule crash;
  double v_max = 3.0;             // m/s
  ObsCaps caps;
  EieParams eie;
  int probe_burst_frames = 10;    // frames averaged per complexity probe
  double route_offset_s = 0;      // episode start inside the route
  double bandwidth_offset_s = 0;  // episode start inside the bandwidth trace
  double edge_cores = 4.0;        // grant used when no external grant is set
  std::optional<double> forced_latency_s;  // testing hook: bypasses the latency model
};

struct StepInfo {
  int decisions = 0;
  double mean_latency_s = 0;
  bool crashed = false;
  bool route_exhausted = false;
  double clock_s = 0;
  double distance_m = 0;  // cumulative episode flight distance
  bool dynamics_degenerate = false;
};

struct StepResult {
  SchedulerState state;
  double reward = 0;  // QoN of the decision window, in [0, 1]
  bool done = false;
  StepInfo info;
};

// Trace-driven flight episode. Decisions are strictly sequential: the frame
// captured at t is answered at t + latency, scored against ground truth at
// arrival, and the next capture happens at the arrival time (never earlier
// than the next camera frame). One step holds the configuration for tau.
class SimEnv {
 public:
  SimEnv(Route route, BandwidthTrace bandwidth, DegradationProfile degradation,
         LatencyProfile latency, EnvConfig config, std::uint64_t seed);

  SchedulerState reset();
  StepResult step(const Action& action);

  bool done() const { return done_; }
  double clock() const { return clock_; }
  const SchedulerState& state() const { return state_; }
  const EnvConfig& config() const { return config_; }
  const LatencyProfile& latency_profile() const { return latency_; }
  const std::vector<DecisionRecord>& records() const { return records_; }
  bool crashed() const { return crashed_; }

  // Grant consumed by subsequent decisions (set per allocation epoch in
  // multi-drone runs).
  void set_edge_cores(double cores) { cores_ = cores; }
  double edge_cores() const { return cores_; }

 private:
  double probe_complexity(double t) const;
  NavOutput probe_output(double t) const;
  double route_time(double t) const { return config_.route_offset_s + t; }

  Route route_;
  BandwidthTrace bandwidth_;
  DegradationProfile degradation_;
  LatencyProfile latency_;
  EnvConfig config_;
  std::uint64_t seed_ = 0;

  SchedulerState state_;
  std::vector<DecisionRecord> records_;
  double clock_ = 0;
  double cores_ = 0;
  int violation_run_ = 0;
  bool crashed_ = false;
  bool route_exhausted_ = false;
  bool done_ = true;  // step before reset is an error
};

}  // namespace edgenav
