#include "edgenav/action.hpp"

namespace edgenav {

std::string action_token(const Action& a) {
  if (!a.edge) return "local/" + std::to_string(a.resolution);
  return "edge/" + std::to_string(a.resolution) + "/" + std::to_string(a.quality);
}

}  // namespace edgenav
