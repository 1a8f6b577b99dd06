#include "edgenav/fleet.hpp"

#include <cmath>

#include "edgenav/errors.hpp"

namespace edgenav {

namespace {

std::vector<double> strategy_grants(const FleetConfig& config,
                                    const std::vector<double>& bandwidths) {
  const auto n = static_cast<int>(bandwidths.size());
  switch (config.strategy) {
    case FleetStrategy::Even:
    case FleetStrategy::Agnostic:
      return even_allocation(config.bounds.lambda, n);
    case FleetStrategy::A3d: {
      AllocationProblem problem;
      problem.bandwidth_kbps = bandwidths;
      problem.regression = config.regression;
      problem.bounds = config.bounds;
      return allocate(problem);
    }
    case FleetStrategy::NoBounds: {
      // Proportional split only, no bounds enforcement.
      std::vector<double> f;
      f.reserve(bandwidths.size());
      double fsum = 0;
      for (double b : bandwidths) {
        f.push_back(predict_ratio(config.regression, b));
        fsum += f.back();
      }
      std::vector<double> grants(bandwidths.size());
      for (std::size_t i = 0; i < grants.size(); ++i) {
        const double exact = config.bounds.lambda * f[i] / fsum;
        grants[i] = std::floor(exact / config.bounds.granularity + 1e-9) *
                    config.bounds.granularity;
      }
      return grants;
    }
  }
  throw ContractError("unknown fleet strategy");
}

}  // namespace

FleetResult run_fleet(std::vector<SimEnv> envs, const PolicyFn& policy,
                      const FleetConfig& config) {
  if (envs.empty()) throw ValidationError("fleet needs at least one drone");
  const double tau = envs.front().config().tau_s;
  for (const auto& env : envs)
    if (std::abs(env.config().tau_s - tau) > 1e-9)
      throw ValidationError("all drones must share the decision window");
  if (config.allocation_period_s <= 0)
    throw ValidationError("allocation period must be positive");
  const double ratio = config.allocation_period_s / tau;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    throw ValidationError("allocation period must be a multiple of the decision window");
  const int steps_per_epoch = static_cast<int>(std::round(ratio));

  const std::size_t n = envs.size();
  std::vector<SchedulerState> states(n);
  std::vector<bool> active(n, true);
  std::vector<double> reward_sum(n, 0.0);
  std::vector<int> offload_steps(n, 0);

  FleetResult result;
  result.drones.resize(n);

  for (std::size_t i = 0; i < n; ++i) states[i] = envs[i].reset();

  std::vector<double> observed(n, 0.0);
  bool stop = false;
  for (int step = 0; !stop; ++step) {
    std::size_t remaining = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (active[i]) ++remaining;
    if (remaining == 0) break;

    if (step % steps_per_epoch == 0) {
      // Re-split the pool across drones still flying.
      std::vector<double> bandwidths;
      std::vector<std::size_t> index;
      for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        bandwidths.push_back(states[i].b);
        index.push_back(i);
      }
      const std::vector<double> grants = strategy_grants(config, bandwidths);

      AllocationEpoch epoch;
      epoch.time_s = step * tau;
      epoch.bandwidth_kbps.assign(n, 0.0);
      epoch.grants.assign(n, 0.0);
      for (std::size_t k = 0; k < index.size(); ++k) {
        const std::size_t i = index[k];
        envs[i].set_edge_cores(grants[k]);
        // Resource-agnostic drones schedule as if they owned the whole pool.
        observed[i] = config.strategy == FleetStrategy::Agnostic ? config.bounds.lambda
                                                                 : grants[k];
        epoch.bandwidth_kbps[i] = bandwidths[k];
        epoch.grants[i] = grants[k];
      }
      result.epochs.push_back(epoch);
    }

    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      SchedulerState view = states[i];
      view.s = observed[i];
      const Action action = policy(envs[i], view);
      const StepResult r = envs[i].step(action);
      states[i] = r.state;
      states[i].s = observed[i];
      reward_sum[i] += r.reward;
      ++result.drones[i].steps;
      if (action.edge) ++offload_steps[i];
      result.drones[i].crashed = r.info.crashed;
      result.drones[i].distance_m = r.info.distance_m;
      if (r.done) {
        active[i] = false;
        if (r.info.crashed && config.termination == FleetTermination::FirstCrash)
          stop = true;
      }
    }
  }

  double qon_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    DroneResult& d = result.drones[i];
    d.qon = d.steps > 0 ? reward_sum[i] / d.steps : 0.0;
    d.offload_ratio = d.steps > 0 ? static_cast<double>(offload_steps[i]) / d.steps : 0.0;
    double latency_sum = 0;
    for (const auto& rec : envs[i].records()) latency_sum += rec.latency_s;
    d.decisions = static_cast<int>(envs[i].records().size());
    d.mean_latency_s = d.decisions > 0 ? latency_sum / d.decisions : 0.0;
    qon_sum += d.qon;
  }
  result.mean_qon = qon_sum / static_cast<double>(n);
  return result;
}

}  // namespace edgenav
