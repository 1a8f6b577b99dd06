#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgenav/allocator.hpp"
#include "edgenav/env.hpp"
#include "edgenav/scheduler.hpp"

namespace edgenav {

// One config tree drives every command. Values here are the defaults; a JSON
// config file overrides fields selectively (objects merge, scalars replace)
// and CLI flags override the file.

struct SimSection {
  double tau_s = 5.0;
  double episode_length_s = 100.0;
  double epsilon = 0.13;
  double v_max = 3.0;
  CrashRule crash;
  ObsCaps caps;
  EieParams eie;
  int probe_burst_frames = 10;
  double edge_cores = 4.0;  // constant grant in single-drone runs
};

struct RouteSection {
  std::string preset = "shoreline";  // shoreline | training, or csv path below
  std::string csv_path;
  double noise_scale = 0.01;
};

struct BandwidthSection {
  std::string preset = "eval";  // eval | training | b1..b4, or csv path below
  std::string csv_path;
};

struct TrainSection {
  A2cConfig agent;
  std::string route_preset = "training";
  std::string bandwidth_preset = "training";
  double cores_min = 0.5;  // per-episode grant is drawn from this range
  double cores_max = 10.0;
  std::uint64_t seed = 1;
};

struct EvalSection {
  int episodes = 5;
  std::uint64_t seed = 101;
};

struct FleetSection {
  int drones = 4;
  AllocationBounds bounds;
  std::string strategy = "a3d";  // a3d | even | agnostic | no-bounds
  std::string termination = "first-crash";  // first-crash | all-crash
  double allocation_period_s = 5.0;
  // Fitted from the dynamic policy's measured offload ratio at constant link
  // rates (fit-regression --policy dynamic).
  OffloadRegression regression{0.327373229, -1.90344921, 0.01, 1.0};
  std::vector<std::string> bandwidth_presets{"b1", "b2", "b3", "b4"};
  std::uint64_t seed = 7;
};

struct Config {
  SimSection sim;
  DegradationProfile degradation = DegradationProfile::defaults();
  LatencyProfile latency = LatencyProfile::defaults();
  RouteSection route;
  BandwidthSection bandwidth;
  TrainSection train;
  EvalSection eval;
  FleetSection fleet;
  std::uint64_t seed = 1;
};

Config default_config();

// Parses the file and overlays it onto the defaults. Unknown keys are errors.
Config load_config(const std::string& path);
std::string config_to_json(const Config& config);

// FNV-1a over the canonical JSON form.
std::string config_hash(const Config& config);

// manifest.json next to every output set: command, config hash, seed, format
// versions. Deterministic byte-for-byte for a given config and seed.
void write_manifest(const std::string& dir, const std::string& command,
                    const Config& config, std::uint64_t seed);

}  // namespace edgenav
