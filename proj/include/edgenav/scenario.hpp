#pragma once

#include <cstdint>
#include <string>

#include "edgenav/config.hpp"
#include "edgenav/env.hpp"
#include "edgenav/scheduler.hpp"
#include "edgenav/traces.hpp"

namespace edgenav {

// Built-in scenario presets. "shoreline" is the evaluation course: turns get
// progressively sharper along the route. "training" is a long mixed course
// that training episodes sample 100 s segments from.

RouteSpec shoreline_route_spec();
RouteSpec training_route_spec();

// eval | training | b1 | b2 | b3 | b4 (b1 best link, b4 worst).
BandwidthGenSpec bandwidth_preset_spec(const std::string& name);

Route make_route(const RouteSection& section, std::uint64_t seed);
BandwidthTrace make_bandwidth(const std::string& preset, const std::string& csv_path,
                              std::uint64_t seed);

EnvConfig env_config_from(const Config& config);

// Fresh evaluation episode: the configured route/bandwidth with noise and
// generator draws keyed by episode_seed.
SimEnv make_eval_env(const Config& config, std::uint64_t episode_seed);
SimFactory eval_factory(const Config& config);

// Training episodes sample a random segment of the training course and trace
// and a random constant core grant, all keyed by the episode seed.
EnvFactory training_factory(const Config& config);

// One env per drone: the configured route per drone (fresh noise each) and the
// fleet bandwidth presets cycled across drones, all keyed by run_seed.
std::vector<SimEnv> make_fleet_envs(const Config& config, std::uint64_t run_seed);

}  // namespace edgenav
