#include "edgenav/latency.hpp"

#include <cmath>
#include <string>

#include "edgenav/errors.hpp"

namespace edgenav {

LatencyProfile LatencyProfile::defaults() {
  LatencyProfile p;
  p.local_compute_s = {{448, 0.709}, {224, 0.21}, {112, 0.07}};

  // 448 anchors follow a 26.5x speedup from 1 to 10 cores; smaller inputs
  // scale with resolution area.
  const double base[5] = {0.53, 0.1976, 0.0737, 0.0275, 0.02};
  const double cores[5] = {1, 2, 4, 8, 10};
  const double area_scale[3] = {1.0, 0.25, 0.0625};
  for (int r = 0; r < 3; ++r) {
    std::vector<CoreAnchor> anchors;
    for (int i = 0; i < 5; ++i) anchors.push_back({cores[i], base[i] * area_scale[r]});
    p.edge_anchors[kResolutions[r]] = std::move(anchors);
  }

  p.payload_kb = {
      {{448, 95}, 110}, {{448, 60}, 45}, {{448, 10}, 12},
      {{224, 95}, 30},  {{224, 60}, 13}, {{224, 10}, 4},
      {{112, 95}, 9},   {{112, 60}, 4},  {{112, 10}, 1.5},
  };
  return p;
}

void validate(const LatencyProfile& profile) {
  if (profile.fixed_overhead_s < 0 || profile.propagation_s < 0)
    throw ValidationError("latency overheads must be non-negative");
  for (const auto& [r, s] : profile.local_compute_s)
    if (s <= 0) throw ValidationError("local compute must be positive for resolution " +
                                      std::to_string(r));
  for (const auto& [r, anchors] : profile.edge_anchors) {
    if (anchors.empty())
      throw ValidationError("no edge anchors for resolution " + std::to_string(r));
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      if (anchors[i].cores <= 0 || anchors[i].seconds <= 0)
        throw ValidationError("edge anchors must be positive");
      if (i > 0 && (anchors[i].cores <= anchors[i - 1].cores ||
                    anchors[i].seconds > anchors[i - 1].seconds))
        throw ValidationError("edge anchors must increase in cores and not in latency");
    }
  }
  for (const auto& [key, kb] : profile.payload_kb)
    if (kb <= 0) throw ValidationError("payload sizes must be positive");
}

double local_latency(const LatencyProfile& profile, int resolution) {
  auto it = profile.local_compute_s.find(resolution);
  if (it == profile.local_compute_s.end())
    throw ValidationError("no local compute entry for resolution " +
                          std::to_string(resolution));
  return it->second + profile.fixed_overhead_s;
}

double edge_compute_latency(const LatencyProfile& profile, int resolution, double cores) {
  if (cores <= 0)
    throw ServiceUnavailableError("offload requested with no granted edge cores");
  auto it = profile.edge_anchors.find(resolution);
  if (it == profile.edge_anchors.end())
    throw ValidationError("no edge anchors for resolution " + std::to_string(resolution));
  const auto& anchors = it->second;

  if (cores >= anchors.back().cores) return anchors.back().seconds;
  std::size_t hi = 1;
  while (hi + 1 < anchors.size() && anchors[hi].cores < cores) ++hi;
  // Segment [hi-1, hi] covers cores, or is the first segment when cores sits
  // below the first anchor (extrapolated).
  if (anchors.size() == 1) return anchors[0].seconds;
  const CoreAnchor& a = anchors[hi - 1];
  const CoreAnchor& b = anchors[hi];
  const double w = (std::log(cores) - std::log(a.cores)) /
                   (std::log(b.cores) - std::log(a.cores));
  const double v = a.seconds + (b.seconds - a.seconds) * w;
  return std::max(v, 1e-6);
}

double transmit_latency(const LatencyProfile& profile, int resolution, int quality,
                        double bandwidth_kbps) {
  if (bandwidth_kbps <= 0) throw ValidationError("bandwidth must be positive");
  auto it = profile.payload_kb.find({resolution, quality});
  if (it == profile.payload_kb.end())
    throw ValidationError("no payload entry for resolution " + std::to_string(resolution) +
                          " quality " + std::to_string(quality));
  return it->second * 8.0 / bandwidth_kbps + profile.propagation_s;
}

double end_to_end(const LatencyProfile& profile, const Action& action,
                  double bandwidth_kbps, double cores) {
  if (!action.edge) return local_latency(profile, action.resolution);
  return transmit_latency(profile, action.resolution, action.quality, bandwidth_kbps) +
         edge_compute_latency(profile, action.resolution, cores) +
         profile.fixed_overhead_s;
}

}  // namespace edgenav
