#include "edgenav/metrics.hpp"

#include <cmath>

#include "edgenav/errors.hpp"

namespace edgenav {

double qon(const std::vector<DecisionRecord>& records, double epsilon) {
  if (records.empty()) throw ValidationError("qon of an empty window is undefined");
  if (epsilon < 0) throw ValidationError("epsilon must be non-negative");
  std::size_t ok = 0;
  for (const auto& r : records)
    if (std::abs(r.theta_pre - r.theta_gt) <= epsilon) ++ok;
  return static_cast<double>(ok) / static_cast<double>(records.size());
}

double velocity(double p, double v_max) {
  if (v_max < 0) throw ValidationError("v_max must be non-negative");
  if (p < 0 || p > 1) throw ValidationError("p must be in [0, 1]");
  return v_max * (1.0 - p);
}

std::optional<std::size_t> crash_index(const std::vector<DecisionRecord>& records,
                                       const CrashRule& rule) {
  if (rule.consecutive <= 0) throw ValidationError("crash rule needs consecutive >= 1");
  int run = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (std::abs(records[i].theta_pre - records[i].theta_gt) > rule.epsilon_crash) {
      if (++run >= rule.consecutive) return i;
    } else {
      run = 0;
    }
  }
  return std::nullopt;
}

double flight_distance(const std::vector<DecisionRecord>& records, double v_max,
                       const CrashRule& rule) {
  if (records.empty()) return 0;
  const std::size_t end = crash_index(records, rule).value_or(records.size());
  const std::size_t n = records.size();
  double distance = 0;
  for (std::size_t i = 0; i < end; ++i) {
    double gap;
    if (i + 1 < n) {
      gap = records[i + 1].t_decide - records[i].t_decide;
    } else if (n >= 2) {
      gap = records[n - 1].t_decide - records[n - 2].t_decide;
    } else {
      gap = records[0].t_decide - records[0].t_capture;
    }
    if (gap < 0) throw ValidationError("decision records must be ordered by t_decide");
    distance += velocity(records[i].p_pre, v_max) * gap;
  }
  return distance;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("pearson inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw ValidationError("pearson needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw ValidationError("pearson input has zero variance");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace edgenav
