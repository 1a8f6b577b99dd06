#pragma once

#include "edgenav/action.hpp"
#include "edgenav/latency.hpp"

namespace edgenav {

// Fixed reference policies: always-onboard at full resolution, always-offload
// at full resolution and quality, and a latency-greedy switch between the two.
enum class BaselineKind { Local, Offload, Dynamic };

Action baseline_action(BaselineKind kind, const LatencyProfile& profile,
                       double bandwidth_kbps, double cores);

}  // namespace edgenav
