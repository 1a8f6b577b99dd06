#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "edgenav/action.hpp"

namespace edgenav {

// One navigation decision as it lands on the drone: the model saw the frame
// captured at t_capture and its command arrived at t_decide, where it is
// scored against the ground truth of the arrival frame.

struct DecisionRecord {
  double t_capture = 0;
  double t_decide = 0;
  double theta_pre = 0;   // predicted steering angle, radians
  double theta_gt = 0;    // ground truth at t_decide
  double p_pre = 0;       // predicted collision probability
  Action action;
  double latency_s = 0;
};

// Fraction of decisions within epsilon of ground truth (boundary counts as
// success). Empty input is an error: a window with no decisions has no QoN.
double qon(const std::vector<DecisionRecord>& records, double epsilon);

// Commanded speed from predicted collision probability.
double velocity(double p, double v_max);

struct CrashRule {
  double epsilon_crash = 0.5;  // radians
  int consecutive = 3;
};

// Index of the decision at which the rule fires (the k-th consecutive
// violation), or nullopt when the run never crashes.
std::optional<std::size_t> crash_index(const std::vector<DecisionRecord>& records,
                                       const CrashRule& rule);

// Sum of velocity(p_pre) times the gap to the next decision over the records
// before the crash event. The final record reuses the preceding gap (its own
// latency when it is the only record).
double flight_distance(const std::vector<DecisionRecord>& records, double v_max,
                       const CrashRule& rule);

// Pearson correlation; needs at least two points and non-zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace edgenav
