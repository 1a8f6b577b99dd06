#pragma once

#include <vector>

namespace edgenav {

// Network-aware edge CPU allocation. Each drone's appetite for edge cores is
// predicted from its bandwidth by a fitted log curve; the pool is split
// proportionally, then pushed inside per-drone bounds: grants above the upper
// bound are capped, grants below the lower bound are either raised or dropped
// to zero when the capped surplus cannot cover the raises.

struct OffloadRegression {
  double a = 0;      // slope against ln(bandwidth_kbps)
  double c = 0;      // intercept
  double f_min = 0.01;
  double f_max = 1.0;
};

// clamp(a * ln(b) + c, [f_min, f_max]); b must be positive.
double predict_ratio(const OffloadRegression& reg, double bandwidth_kbps);

// Least-squares fit of ratio against ln(bandwidth). Needs two distinct
// bandwidth values; ratios must lie in [0, 1].
OffloadRegression fit_regression(const std::vector<double>& bandwidth_kbps,
                                 const std::vector<double>& ratios);

struct AllocationBounds {
  double lambda = 12;      // total pool, virtual cores
  double upper = 4;        // per-drone cap
  double lower = 0.8;      // minimum useful grant
  double granularity = 0.1;  // grants are truncated to this step
};

// lambda * f_i / sum(f): the bound-free proportional split of the pool.
std::vector<double> proportional_split(const std::vector<double>& ratios,
                                       double lambda);

// Total grant mass sitting above the cap / missing below the floor.
double allocation_surplus(const std::vector<double>& split, double upper);
double allocation_shortage(const std::vector<double>& split, double lower);

// Core algorithm on explicit per-drone ratios.
std::vector<double> allocate_from_ratios(const std::vector<double>& ratios,
                                         const AllocationBounds& bounds);
// Same, without the final truncation to granularity.
std::vector<double> allocate_from_ratios_exact(const std::vector<double>& ratios,
                                               const AllocationBounds& bounds);

struct AllocationProblem {
  std::vector<double> bandwidth_kbps;  // one per drone
  OffloadRegression regression;
  AllocationBounds bounds;
};

std::vector<double> allocate(const AllocationProblem& problem);

// lambda / n for every drone, ignoring bounds.
std::vector<double> even_allocation(double lambda, int n);

}  // namespace edgenav
