#include "edgenav/scenario.hpp"

#include <algorithm>
#include <iterator>
#include <memory>
#include <utility>
#include <vector>

#include "edgenav/errors.hpp"
#include "edgenav/hashrand.hpp"

namespace edgenav {

namespace {

RouteSegment straight(double length_s) {
  RouteSegment s;
  s.kind = SegmentKind::Straight;
  s.length_s = length_s;
  return s;
}

RouteSegment turn(double peak_rad, double length_s) {
  RouteSegment s;
  s.kind = SegmentKind::Turn;
  s.length_s = length_s;
  s.magnitude_rad = peak_rad;
  return s;
}

RouteSegment curve(double amplitude_rad, double length_s, double period_s) {
  RouteSegment s;
  s.kind = SegmentKind::Curve;
  s.length_s = length_s;
  s.magnitude_rad = amplitude_rad;
  s.period_s = period_s;
  return s;
}

}  // namespace

RouteSpec shoreline_route_spec() {
  // Coastal patrol course. Turn ramp rates sharpen along the route: 0.2 rad/s
  // on the early bends, 0.625 mid-route, 1.1 past the cove, then two ~2.15
  // rad/s switchbacks before the final calm stretch. Higher decision latency
  // therefore fails earlier along the course.
  RouteSpec spec;
  spec.segments = {
      straight(10),
      turn(0.8, 8),
      straight(5),
      turn(-0.6, 6),
      straight(5),
      turn(2.5, 8),
      straight(6),
      curve(0.5, 10, 10),
      straight(6),
      turn(-2.2, 4),
      straight(8),
      turn(2.8, 2.6),
      straight(6),
      turn(-2.8, 2.6),
      straight(8),
      turn(0.8, 8),
      straight(32),
  };
  return spec;
}

RouteSpec training_route_spec() {
  // Five mixed blocks with alternating turn direction, ~122 s each. Ramp
  // rates span 0.25 to 2.15 rad/s so every difficulty regime appears many
  // times; episodes start at random offsets inside the course.
  RouteSpec spec;
  for (int block = 0; block < 5; ++block) {
    const double s = block % 2 == 0 ? 1.0 : -1.0;
    const RouteSegment segs[] = {
        straight(8),
        turn(s * 1.0, 8),
        straight(4),
        turn(s * -1.6, 8),
        straight(6),
        curve(s * 0.5, 10, 8),
        turn(s * 2.2, 8),
        straight(5),
        turn(s * -2.2, 4),
        straight(7),
        turn(s * 2.8, 2.6),
        straight(5),
        curve(s * -0.3, 8, 6),
        turn(s * -2.4, 3),
        straight(6),
        turn(s * 0.9, 6),
        straight(4),
        turn(s * -2.8, 2.6),
        straight(6),
        turn(s * 1.8, 6),
        straight(5),
    };
    spec.segments.insert(spec.segments.end(), std::begin(segs), std::end(segs));
  }
  spec.segments.push_back(straight(10));
  return spec;
}

BandwidthGenSpec bandwidth_preset_spec(const std::string& name) {
  BandwidthGenSpec spec;
  spec.kind = BandwidthKind::MarkovLevels;
  spec.duration_s = 140;
  spec.stay_prob = 0.9;
  if (name == "eval") {
    spec.levels = {600, 1500, 3000, 6000, 10000};
  } else if (name == "training") {
    spec.levels = {300, 800, 1500, 3000, 6000, 10000, 14000};
    spec.stay_prob = 0.85;
    spec.duration_s = 700;
  } else if (name == "b1") {
    spec.levels = {6000, 9000, 12000};
  } else if (name == "b2") {
    spec.levels = {2500, 4000, 7000};
  } else if (name == "b3") {
    spec.levels = {800, 1500, 3000};
  } else if (name == "b4") {
    spec.levels = {250, 500, 1000};
  } else {
    throw ValidationError("unknown bandwidth preset: " + name);
  }
  return spec;
}

Route make_route(const RouteSection& section, std::uint64_t seed) {
  if (!section.csv_path.empty()) return load_route(section.csv_path);
  RouteSpec spec;
  if (section.preset == "shoreline") {
    spec = shoreline_route_spec();
  } else if (section.preset == "training") {
    spec = training_route_spec();
  } else {
    throw ValidationError("unknown route preset: " + section.preset);
  }
  spec.noise_scale = section.noise_scale;
  return generate_route(spec, seed);
}

BandwidthTrace make_bandwidth(const std::string& preset, const std::string& csv_path,
                              std::uint64_t seed) {
  if (!csv_path.empty()) return load_bandwidth_trace(csv_path);
  return generate_bandwidth(bandwidth_preset_spec(preset), seed);
}

EnvConfig env_config_from(const Config& config) {
  EnvConfig env;
  env.tau_s = config.sim.tau_s;
  env.episode_length_s = config.sim.episode_length_s;
  env.epsilon = config.sim.epsilon;
  env.crash = config.sim.crash;
  env.v_max = config.sim.v_max;
  env.caps = config.sim.caps;
  env.eie = config.sim.eie;
  env.probe_burst_frames = config.sim.probe_burst_frames;
  env.edge_cores = config.sim.edge_cores;
  return env;
}

SimEnv make_eval_env(const Config& config, std::uint64_t episode_seed) {
  Route route = make_route(config.route, hash_key(episode_seed, 11));
  BandwidthTrace bw = make_bandwidth(config.bandwidth.preset, config.bandwidth.csv_path,
                                     hash_key(episode_seed, 12));
  return SimEnv(std::move(route), std::move(bw), config.degradation, config.latency,
                env_config_from(config), hash_key(episode_seed, 13));
}

SimFactory eval_factory(const Config& config) {
  return [config](std::uint64_t episode_seed) { return make_eval_env(config, episode_seed); };
}

EnvFactory training_factory(const Config& config) {
  // A small pool of pre-generated courses and traces keeps per-episode setup
  // cheap while episode seeds still vary the segment, link and grant.
  constexpr int kPoolSize = 4;
  struct Pool {
    std::vector<Route> routes;
    std::vector<BandwidthTrace> traces;
  };
  auto pool = std::make_shared<Pool>();
  RouteSection route_section;
  route_section.preset = config.train.route_preset;
  route_section.noise_scale = config.route.noise_scale;
  for (int i = 0; i < kPoolSize; ++i) {
    pool->routes.push_back(
        make_route(route_section, hash_key(config.train.seed, 31, static_cast<std::uint64_t>(i))));
    pool->traces.push_back(make_bandwidth(config.train.bandwidth_preset, "",
                                          hash_key(config.train.seed, 32, static_cast<std::uint64_t>(i))));
  }

  const EnvConfig base = env_config_from(config);
  if (config.train.cores_min < 0 || config.train.cores_max < config.train.cores_min)
    throw ValidationError("training core range is invalid");

  return [config, pool, base](std::uint64_t episode_seed) -> std::unique_ptr<RolloutEnv> {
    const Route& route =
        pool->routes[hash_key(episode_seed, 21) % pool->routes.size()];
    const BandwidthTrace& trace =
        pool->traces[hash_key(episode_seed, 22) % pool->traces.size()];

    EnvConfig env_config = base;
    const double route_span =
        std::max(0.0, route.duration() - base.episode_length_s - route.frame_period);
    env_config.route_offset_s = uniform01(hash_key(episode_seed, 23)) * route_span;
    const double trace_span =
        std::max(0.0, trace.end_time() - base.episode_length_s);
    env_config.bandwidth_offset_s = uniform01(hash_key(episode_seed, 24)) * trace_span;
    env_config.edge_cores =
        config.train.cores_min +
        uniform01(hash_key(episode_seed, 25)) * (config.train.cores_max - config.train.cores_min);

    SimEnv env(route, trace, config.degradation, config.latency, env_config,
               hash_key(episode_seed, 26));
    return std::make_unique<SimRolloutEnv>(std::move(env), config.train.agent.eie_enabled);
  };
}

std::vector<SimEnv> make_fleet_envs(const Config& config, std::uint64_t run_seed) {
  if (config.fleet.drones < 1) throw ValidationError("fleet needs at least one drone");
  if (config.fleet.bandwidth_presets.empty())
    throw ValidationError("fleet needs at least one bandwidth preset");
  std::vector<SimEnv> envs;
  envs.reserve(static_cast<std::size_t>(config.fleet.drones));
  for (int i = 0; i < config.fleet.drones; ++i) {
    const auto di = static_cast<std::uint64_t>(i);
    Route route = make_route(config.route, hash_key(run_seed, 41, di));
    const std::string& preset =
        config.fleet.bandwidth_presets[static_cast<std::size_t>(i) %
                                       config.fleet.bandwidth_presets.size()];
    BandwidthTrace trace = make_bandwidth(preset, "", hash_key(run_seed, 42, di));
    envs.emplace_back(std::move(route), std::move(trace), config.degradation,
                      config.latency, env_config_from(config), hash_key(run_seed, 43, di));
  }
  return envs;
}

}  // namespace edgenav
