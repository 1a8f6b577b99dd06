#include "edgenav/baselines.hpp"

namespace edgenav {

Action baseline_action(BaselineKind kind, const LatencyProfile& profile,
                       double bandwidth_kbps, double cores) {
  const Action local{448, false, kLossless};
  const Action offload{448, true, 95};
  switch (kind) {
    case BaselineKind::Local:
      return local;
    case BaselineKind::Offload:
      return offload;
    case BaselineKind::Dynamic: {
      if (cores <= 0) return local;
      const double l_local = end_to_end(profile, local, bandwidth_kbps, cores);
      const double l_off = end_to_end(profile, offload, bandwidth_kbps, cores);
      return l_off < l_local ? offload : local;  // ties stay onboard
    }
  }
  return local;
}

}  // namespace edgenav
