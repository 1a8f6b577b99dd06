#pragma once

#include <map>
#include <utility>
#include <vector>

#include "edgenav/action.hpp"

namespace edgenav {

// End-to-end decision latency model. Local execution pays an onboard compute
// cost per resolution. Offloading pays uplink transmission (payload size over
// bandwidth plus propagation) and edge compute that shrinks with the granted
// virtual cores. Both pay a fixed capture/actuation overhead.

struct CoreAnchor {
  double cores = 1;
  double seconds = 0;
};

struct LatencyProfile {
  std::map<int, double> local_compute_s;              // by resolution
  std::map<int, std::vector<CoreAnchor>> edge_anchors;  // by resolution
  std::map<std::pair<int, int>, double> payload_kb;   // by (resolution, quality)
  double fixed_overhead_s = 0.01;
  double propagation_s = 0.005;

  static LatencyProfile defaults();
};

void validate(const LatencyProfile& profile);

// Onboard compute plus fixed overhead.
double local_latency(const LatencyProfile& profile, int resolution);

// Edge compute time at a fractional core grant. Latency is interpolated
// linearly against ln(cores) between anchors, extrapolated below the first
// anchor and held flat past the last. cores <= 0 means no service.
double edge_compute_latency(const LatencyProfile& profile, int resolution, double cores);

// Uplink time: payload bits over bandwidth plus propagation.
double transmit_latency(const LatencyProfile& profile, int resolution, int quality,
                        double bandwidth_kbps);

double end_to_end(const LatencyProfile& profile, const Action& action,
                  double bandwidth_kbps, double cores);

}  // namespace edgenav
