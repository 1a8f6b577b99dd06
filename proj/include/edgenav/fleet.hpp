#pragma once

#include <vector>

#include "edgenav/allocator.hpp"
#include "edgenav/scheduler.hpp"

namespace edgenav {

// Multi-drone lockstep simulation. All drones share one edge pool; a resource
// strategy recomputes per-drone grants every allocation period from the
// drones' current bandwidths.

enum class FleetStrategy { A3d, Even, Agnostic, NoBounds };
enum class FleetTermination { FirstCrash, AllCrash };

struct FleetConfig {
  AllocationBounds bounds;  // pool size and per-drone bounds
  FleetStrategy strategy = FleetStrategy::A3d;
  FleetTermination termination = FleetTermination::FirstCrash;
  double allocation_period_s = 5.0;  // multiple of the env decision window
  OffloadRegression regression;      // drives a3d and no-bounds
};

struct DroneResult {
  double qon = 0;
  double mean_latency_s = 0;
  double distance_m = 0;
  double offload_ratio = 0;
  bool crashed = false;
  int decisions = 0;
  int steps = 0;
};

struct AllocationEpoch {
  double time_s = 0;
  std::vector<double> bandwidth_kbps;  // per drone at epoch start (0 if finished)
  std::vector<double> grants;          // per drone, virtual cores
};

struct FleetResult {
  std::vector<DroneResult> drones;
  std::vector<AllocationEpoch> epochs;
  double mean_qon = 0;
};

// Runs every drone with the same policy until the termination rule fires or
// all episodes end. Drones are stepped in index order within each round.
FleetResult run_fleet(std::vector<SimEnv> envs, const PolicyFn& policy,
                      const FleetConfig& config);

}  // namespace edgenav
