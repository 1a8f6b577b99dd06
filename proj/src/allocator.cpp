#include "edgenav/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "edgenav/errors.hpp"

namespace edgenav {

double predict_ratio(const OffloadRegression& reg, double bandwidth_kbps) {
  if (bandwidth_kbps <= 0) throw ValidationError("bandwidth must be positive");
  if (reg.f_min > reg.f_max) throw ValidationError("regression clamp range inverted");
  return std::clamp(reg.a * std::log(bandwidth_kbps) + reg.c, reg.f_min, reg.f_max);
}

OffloadRegression fit_regression(const std::vector<double>& bandwidth_kbps,
                                 const std::vector<double>& ratios) {
  if (bandwidth_kbps.size() != ratios.size())
    throw ValidationError("regression inputs differ in length");
  if (bandwidth_kbps.size() < 2)
    throw ValidationError("regression needs at least two samples");
  const auto n = static_cast<double>(bandwidth_kbps.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < bandwidth_kbps.size(); ++i) {
    if (bandwidth_kbps[i] <= 0) throw ValidationError("bandwidth samples must be positive");
    if (ratios[i] < 0 || ratios[i] > 1)
      throw ValidationError("offloading ratios must be in [0, 1]");
    mx += std::log(bandwidth_kbps[i]);
    my += ratios[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < bandwidth_kbps.size(); ++i) {
    const double dx = std::log(bandwidth_kbps[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (ratios[i] - my);
  }
  if (sxx < 1e-12)
    throw ValidationError("regression is degenerate: all bandwidth samples equal");
  OffloadRegression reg;
  reg.a = sxy / sxx;
  reg.c = my - reg.a * mx;
  return reg;
}

namespace {

void validate_bounds(const AllocationBounds& bounds) {
  if (bounds.lambda <= 0) throw ValidationError("lambda must be positive");
  if (bounds.lower <= 0 || bounds.upper < bounds.lower)
    throw ValidationError("need 0 < lower <= upper");
  if (bounds.granularity <= 0) throw ValidationError("granularity must be positive");
}

}  // namespace

std::vector<double> proportional_split(const std::vector<double>& ratios,
                                       double lambda) {
  if (ratios.empty()) throw ValidationError("allocation needs at least one drone");
  if (lambda <= 0) throw ValidationError("lambda must be positive");
  double fsum = 0;
  for (double f : ratios) {
    if (f <= 0 || f > 1) throw ValidationError("offloading ratios must be in (0, 1]");
    fsum += f;
  }
  std::vector<double> init(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i)
    init[i] = lambda * ratios[i] / fsum;
  return init;
}

double allocation_surplus(const std::vector<double>& split, double upper) {
  double surplus = 0;
  for (double v : split)
    if (v > upper) surplus += v - upper;
  return surplus;
}

double allocation_shortage(const std::vector<double>& split, double lower) {
  double shortage = 0;
  for (double v : split)
    if (v < lower) shortage += lower - v;
  return shortage;
}

std::vector<double> allocate_from_ratios_exact(const std::vector<double>& ratios,
                                               const AllocationBounds& bounds) {
  validate_bounds(bounds);

  const std::size_t n = ratios.size();
  const double h = bounds.upper;
  const double l = bounds.lower;

  const std::vector<double> init = proportional_split(ratios, bounds.lambda);
  std::vector<double> s = init;
  enum class Group { Mid, Capped, Raised, Dropped };
  std::vector<Group> group(n, Group::Mid);

  double surplus = 0;  // freed by capping at h
  double deficit = 0;  // owed by raising to l
  for (std::size_t i = 0; i < n; ++i) {
    if (init[i] > h) {
      group[i] = Group::Capped;
      surplus += init[i] - h;
      s[i] = h;
    } else if (init[i] < l) {
      group[i] = Group::Raised;
      deficit += l - init[i];
      s[i] = l;
    }
  }

  // Drop the neediest raised drones until the capped surplus covers what the
  // raises still owe. Each drop releases a full l of obligation, so the
  // running deficit may go negative; that ends the loop.
  while (surplus - deficit < 0) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (group[i] != Group::Raised) continue;
      if (pick == n || init[i] < init[pick]) pick = i;
    }
    if (pick == n)
      throw ContractError("raise deficit left without any raised drone to drop");
    group[pick] = Group::Dropped;
    s[pick] = 0;
    deficit -= l;
  }

  // Hand the remaining surplus out proportionally to the offloading ratios,
  // never past the per-drone cap; anything the caps refuse stays unallocated.
  const double leftover = surplus - deficit;
  if (leftover > 0) {
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < n; ++i)
      if (group[i] == Group::Mid) targets.push_back(i);
    if (targets.empty()) {
      for (std::size_t i = 0; i < n; ++i)
        if (group[i] != Group::Dropped) targets.push_back(i);
    }
    double tsum = 0;
    for (std::size_t i : targets) tsum += ratios[i];
    if (!targets.empty() && tsum > 0) {
      for (std::size_t i : targets)
        s[i] = std::min(h, s[i] + leftover * ratios[i] / tsum);
    }
  }
  return s;
}

std::vector<double> allocate_from_ratios(const std::vector<double>& ratios,
                                         const AllocationBounds& bounds) {
  std::vector<double> s = allocate_from_ratios_exact(ratios, bounds);
  for (double& v : s)
    v = std::floor(v / bounds.granularity + 1e-9) * bounds.granularity;
  return s;
}

std::vector<double> allocate(const AllocationProblem& problem) {
  std::vector<double> ratios;
  ratios.reserve(problem.bandwidth_kbps.size());
  for (double b : problem.bandwidth_kbps)
    ratios.push_back(predict_ratio(problem.regression, b));
  return allocate_from_ratios(ratios, problem.bounds);
}

std::vector<double> even_allocation(double lambda, int n) {
  if (n <= 0) throw ValidationError("need at least one drone");
  if (lambda < 0) throw ValidationError("lambda must be non-negative");
  return std::vector<double>(static_cast<std::size_t>(n), lambda / n);
}

}  // namespace edgenav
