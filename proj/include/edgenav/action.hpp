#pragma once

#include <array>
#include <string>

namespace edgenav {

inline constexpr std::array<int, 3> kResolutions{448, 224, 112};
inline constexpr std::array<int, 3> kQualities{95, 60, 10};

// Quality value used for local execution (uncompressed frames).
inline constexpr int kLossless = 0;

// One scheduling decision: input resolution, execution location and, when
// offloading, the JPEG quality used on the uplink.
struct Action {
  int resolution = 448;
  bool edge = false;
  int quality = kLossless;  // 95 | 60 | 10 when edge, kLossless otherwise

  bool operator==(const Action&) const = default;
};

std::string action_token(const Action& a);

}  // namespace edgenav
