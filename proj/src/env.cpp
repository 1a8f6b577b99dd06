#include "edgenav/env.hpp"

#include <algorithm>
#include <cmath>

#include "edgenav/errors.hpp"

namespace edgenav {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTimeEps = 1e-9;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

std::array<double, 4> observe_encoded(const SchedulerState& st, const ObsCaps& caps) {
  if (caps.c_cap <= 0 || caps.d_cap <= 0 || caps.b_cap <= 0 || caps.s_cap <= 0)
    throw ValidationError("observation caps must be positive");
  return {clamp01(st.c / caps.c_cap), clamp01(st.d / caps.d_cap),
          clamp01(st.b / caps.b_cap), clamp01(st.s / caps.s_cap)};
}

std::array<double, 4> observe_raw(const SchedulerState& st, const ObsCaps& caps) {
  if (caps.b_cap <= 0 || caps.s_cap <= 0)
    throw ValidationError("observation caps must be positive");
  return {clamp01((st.raw_theta / kPi + 1.0) / 2.0), clamp01(st.raw_p),
          clamp01(st.b / caps.b_cap), clamp01(st.s / caps.s_cap)};
}

SimEnv::SimEnv(Route route, BandwidthTrace bandwidth, DegradationProfile degradation,
               LatencyProfile latency, EnvConfig config, std::uint64_t seed)
    : route_(std::move(route)),
      bandwidth_(std::move(bandwidth)),
      degradation_(degradation),
      latency_(std::move(latency)),
      config_(config),
      seed_(seed) {
  if (config_.tau_s <= 0) throw ValidationError("tau must be positive");
  if (config_.episode_length_s <= 0)
    throw ValidationError("episode length must be positive");
  const double steps = config_.episode_length_s / config_.tau_s;
  if (std::abs(steps - std::round(steps)) > 1e-9)
    throw ValidationError("tau must divide the episode length");
  if (config_.probe_burst_frames < 1)
    throw ValidationError("probe burst needs at least one frame");
  if (config_.forced_latency_s && *config_.forced_latency_s < 0)
    throw ValidationError("forced latency must be non-negative");
  validate(latency_);
  if (route_.frames.empty()) throw ValidationError("route has no frames");
  if (config_.route_offset_s < 0 ||
      route_time(config_.episode_length_s) > route_.duration() + kTimeEps)
    throw ValidationError("route does not cover the episode from the requested offset");
}

double SimEnv::probe_complexity(double t) const {
  // Mean complexity over a short forward burst of frames starting at t.
  double sum = 0;
  int n = 0;
  for (int k = 0; k < config_.probe_burst_frames; ++k) {
    const double tk = std::min(route_time(t) + k * route_.frame_period, route_.duration());
    const NavOutput high = infer(route_, tk, kResolutions.front(), kLossless, degradation_, seed_);
    const NavOutput low = infer(route_, tk, kResolutions.back(), kLossless, degradation_, seed_);
    sum += complexity(high, low, config_.eie);
    ++n;
    if (tk >= route_.duration()) break;
  }
  return sum / n;
}

NavOutput SimEnv::probe_output(double t) const {
  const double tk = std::min(route_time(t), route_.duration());
  return infer(route_, tk, kResolutions.front(), kLossless, degradation_, seed_);
}

SchedulerState SimEnv::reset() {
  records_.clear();
  clock_ = 0;
  violation_run_ = 0;
  crashed_ = false;
  route_exhausted_ = false;
  done_ = false;
  cores_ = config_.edge_cores;

  state_ = SchedulerState{};
  state_.c = probe_complexity(0);
  state_.d = 0;
  state_.b = sample_bandwidth(bandwidth_, config_.bandwidth_offset_s);
  state_.s = cores_;
  const NavOutput warmup = probe_output(0);
  state_.raw_theta = warmup.theta;
  state_.raw_p = warmup.p;
  return state_;
}

StepResult SimEnv::step(const Action& action) {
  if (done_) throw ContractError("step called on a finished episode");

  const double window_end =
      std::min(clock_ + config_.tau_s, config_.episode_length_s);
  std::vector<DecisionRecord> window;
  std::vector<NavOutput> outputs;
  double latency_sum = 0;

  while (!done_ && clock_ < window_end - kTimeEps) {
    const double t_cap = clock_;
    if (route_time(t_cap) > route_.duration() + kTimeEps) {
      route_exhausted_ = true;
      done_ = true;
      break;
    }
    const double b = sample_bandwidth(bandwidth_, config_.bandwidth_offset_s + t_cap);

    // With no granted capacity an offload request cannot be served; the frame
    // is processed onboard at the same resolution (and thus uncompressed).
    const bool fallback = action.edge && cores_ <= 0;
    double latency;
    if (config_.forced_latency_s) {
      latency = *config_.forced_latency_s;
    } else if (fallback) {
      latency = local_latency(latency_, action.resolution);
    } else {
      latency = end_to_end(latency_, action, b, cores_);
    }

    const double t_dec = t_cap + latency;
    if (route_time(t_dec) > route_.duration() + kTimeEps) {
      route_exhausted_ = true;
      done_ = true;
      break;
    }

    const int quality = (action.edge && !fallback) ? action.quality : kLossless;
    const NavOutput out =
        infer(route_, route_time(t_cap), action.resolution, quality, degradation_, seed_);
    const RouteFrame& gt = route_.nearest(route_time(t_dec));

    DecisionRecord rec;
    rec.t_capture = t_cap;
    rec.t_decide = t_dec;
    rec.theta_pre = out.theta;
    rec.theta_gt = gt.theta_gt;
    rec.p_pre = out.p;
    rec.action = action;
    rec.latency_s = latency;
    records_.push_back(rec);
    window.push_back(rec);
    outputs.push_back(out);
    latency_sum += latency;

    // A new capture can't precede the next camera frame.
    clock_ = std::max(t_dec, t_cap + route_.frame_period);

    if (std::abs(rec.theta_pre - rec.theta_gt) > config_.crash.epsilon_crash) {
      if (++violation_run_ >= config_.crash.consecutive) {
        crashed_ = true;
        done_ = true;
      }
    } else {
      violation_run_ = 0;
    }
  }

  if (!done_ && clock_ >= config_.episode_length_s - kTimeEps) done_ = true;

  StepResult result;
  result.reward = window.empty() ? 0.0 : qon(window, config_.epsilon);
  result.done = done_;
  result.info.decisions = static_cast<int>(window.size());
  result.info.mean_latency_s =
      window.empty() ? 0.0 : latency_sum / static_cast<double>(window.size());
  result.info.crashed = crashed_;
  result.info.route_exhausted = route_exhausted_;
  result.info.clock_s = clock_;
  result.info.distance_m = flight_distance(records_, config_.v_max, config_.crash);

  const DynamicsResult dyn = dynamics(outputs, config_.eie);
  result.info.dynamics_degenerate = dyn.degenerate;

  const double probe_t = std::min(clock_, config_.episode_length_s);
  state_.c = probe_complexity(probe_t);
  state_.d = dyn.value;
  state_.b = sample_bandwidth(bandwidth_, config_.bandwidth_offset_s + probe_t);
  state_.s = cores_;
  if (!outputs.empty()) {
    state_.raw_theta = outputs.back().theta;
    state_.raw_p = outputs.back().p;
  }
  result.state = state_;
  return result;
}

}  // namespace edgenav
