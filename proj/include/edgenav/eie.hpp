#pragma once

#include <vector>

#include "edgenav/navmodel.hpp"

namespace edgenav {

// Environment encoding: two scalars summarizing how hard the current scene is.
// Complexity compares model outputs for the same frame at the highest and
// lowest resolution; dynamics measures how much outputs moved within the last
// decision window.

struct EieParams {
  double alpha = 0.3;  // weight of the collision-probability term in c
  double beta = 0.09;  // weight of the p spread in d
};

// c = |theta_high - theta_low| + alpha * |p_high - p_low|.
double complexity(const NavOutput& high, const NavOutput& low, const EieParams& params);

struct DynamicsResult {
  double value = 0;
  bool degenerate = false;  // window had fewer than two outputs
};

// d = sigma(theta) + beta * sigma(p) over the window (population sigma).
DynamicsResult dynamics(const std::vector<NavOutput>& window, const EieParams& params);

}  // namespace edgenav
