#include "edgenav/eie.hpp"

#include <cmath>

#include "edgenav/errors.hpp"

namespace edgenav {

double complexity(const NavOutput& high, const NavOutput& low, const EieParams& params) {
  if (params.alpha < 0) throw ValidationError("alpha must be non-negative");
  return std::abs(high.theta - low.theta) + params.alpha * std::abs(high.p - low.p);
}

DynamicsResult dynamics(const std::vector<NavOutput>& window, const EieParams& params) {
  if (params.beta < 0) throw ValidationError("beta must be non-negative");
  if (window.size() < 2) return {0.0, true};

  const auto n = static_cast<double>(window.size());
  double mt = 0, mp = 0;
  for (const auto& o : window) {
    mt += o.theta;
    mp += o.p;
  }
  mt /= n;
  mp /= n;
  double vt = 0, vp = 0;
  for (const auto& o : window) {
    vt += (o.theta - mt) * (o.theta - mt);
    vp += (o.p - mp) * (o.p - mp);
  }
  return {std::sqrt(vt / n) + params.beta * std::sqrt(vp / n), false};
}

}  // namespace edgenav
