// Release gate. Runs every acceptance criterion end to end and prints exactly
// one [PASS]/[FAIL] line per criterion with the measured numbers; the process
// exits non-zero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "edgenav/allocator.hpp"
#include "edgenav/baselines.hpp"
#include "edgenav/config.hpp"
#include "edgenav/eie.hpp"
#include "edgenav/env.hpp"
#include "edgenav/fleet.hpp"
#include "edgenav/hashrand.hpp"
#include "edgenav/metrics.hpp"
#include "edgenav/nnet.hpp"
#include "edgenav/scenario.hpp"
#include "edgenav/scheduler.hpp"

namespace {

using namespace edgenav;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool close(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

// ---------------------------------------------------------------- criterion 1

Outcome closed_form_oracles() {
  const auto t0 = Clock::now();
  double worst = 0;
  const auto check = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
  };
  const EieParams eie;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double p = uniform01(hash_key(9001, i, 1));
    const double vmax = 0.5 + 4.0 * uniform01(hash_key(9001, i, 2));
    check(velocity(p, vmax), vmax * (1.0 - p));

    const int n = 1 + static_cast<int>(hash_key(9001, i, 3) % 40);
    const double eps = 0.05 + 0.2 * uniform01(hash_key(9001, i, 4));
    std::vector<DecisionRecord> recs(static_cast<std::size_t>(n));
    int hits = 0;
    for (int k = 0; k < n; ++k) {
      auto& r = recs[static_cast<std::size_t>(k)];
      r.t_capture = k;
      r.t_decide = k + 0.1;
      r.theta_pre = 2.0 * uniform01(hash_key(9001, i, 100 + 2 * k)) - 1.0;
      r.theta_gt = 2.0 * uniform01(hash_key(9001, i, 101 + 2 * k)) - 1.0;
      if (std::abs(r.theta_pre - r.theta_gt) <= eps) ++hits;
    }
    check(qon(recs, eps), static_cast<double>(hits) / n);

    NavOutput high{3.0 * uniform01(hash_key(9001, i, 5)) - 1.5,
                   uniform01(hash_key(9001, i, 6))};
    NavOutput low{3.0 * uniform01(hash_key(9001, i, 7)) - 1.5,
                  uniform01(hash_key(9001, i, 8))};
    check(complexity(high, low, eie),
          std::abs(high.theta - low.theta) + eie.alpha * std::abs(high.p - low.p));

    const int m = 2 + static_cast<int>(hash_key(9001, i, 9) % 11);
    std::vector<NavOutput> window(static_cast<std::size_t>(m));
    double mt = 0, mp = 0;
    for (int k = 0; k < m; ++k) {
      window[static_cast<std::size_t>(k)] = {
          2.0 * uniform01(hash_key(9001, i, 300 + 2 * k)) - 1.0,
          uniform01(hash_key(9001, i, 301 + 2 * k))};
      mt += window[static_cast<std::size_t>(k)].theta;
      mp += window[static_cast<std::size_t>(k)].p;
    }
    mt /= m;
    mp /= m;
    double vt = 0, vp = 0;
    for (const auto& o : window) {
      vt += (o.theta - mt) * (o.theta - mt);
      vp += (o.p - mp) * (o.p - mp);
    }
    check(dynamics(window, eie).value,
          std::sqrt(vt / m) + eie.beta * std::sqrt(vp / m));

    const int drones = 1 + static_cast<int>(hash_key(9001, i, 10) % 8);
    const double lambda = 0.5 + 19.5 * uniform01(hash_key(9001, i, 11));
    std::vector<double> ratios(static_cast<std::size_t>(drones));
    double sum = 0;
    for (int k = 0; k < drones; ++k) {
      ratios[static_cast<std::size_t>(k)] =
          0.01 + 0.99 * uniform01(hash_key(9001, i, 500 + k));
      sum += ratios[static_cast<std::size_t>(k)];
    }
    const auto split = proportional_split(ratios, lambda);
    double surplus_want = 0, shortage_want = 0;
    for (int k = 0; k < drones; ++k) {
      check(split[static_cast<std::size_t>(k)],
            lambda * ratios[static_cast<std::size_t>(k)] / sum);
      surplus_want += std::max(0.0, split[static_cast<std::size_t>(k)] - 4.0);
      shortage_want += split[static_cast<std::size_t>(k)] < 0.8
                           ? 0.8 - split[static_cast<std::size_t>(k)]
                           : 0.0;
    }
    check(allocation_surplus(split, 4.0), surplus_want);
    check(allocation_shortage(split, 0.8), shortage_want);

    OffloadRegression reg{0.6 * uniform01(hash_key(9001, i, 12)) - 0.1,
                          uniform01(hash_key(9001, i, 13)) - 0.5, 0.01, 1.0};
    const double b = 60.0 + 20000.0 * uniform01(hash_key(9001, i, 14));
    check(predict_ratio(reg, b),
          std::clamp(reg.a * std::log(b) + reg.c, reg.f_min, reg.f_max));
  }
  const double secs = seconds_since(t0);
  Outcome out;
  out.ok = worst <= 1e-12 && secs < 5.0;
  out.detail = "worst rel err " + fmt(worst) + ", " + fmt(secs) + " s";
  return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome allocator_fixtures() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream why;

  const AllocationBounds bounds;
  const std::vector<double> f1{0.8, 0.4, 0.2, 0.6};
  const std::vector<double> exact_want{4.0, 8.0 / 3.0, 4.0 / 3.0, 4.0};
  const auto exact = allocate_from_ratios_exact(f1, bounds);
  for (std::size_t i = 0; i < 4; ++i)
    if (!close(exact[i], exact_want[i], 1e-9)) ok = false;
  if (allocate_from_ratios(f1, bounds) !=
      std::vector<double>{4.0, 2.6, 1.3, 4.0}) {
    ok = false;
    why << "worked example grants off; ";
  }

  AllocationBounds tight = bounds;
  tight.lambda = 2.0;
  if (allocate_from_ratios({0.05, 0.05, 0.05}, tight) !=
      std::vector<double>{0.0, 1.0, 1.0}) {
    ok = false;
    why << "starved example grants off; ";
  }

  int checked = 0;
  for (std::uint64_t it = 0; it < 10000; ++it) {
    const int n = 1 + static_cast<int>(hash_key(321, it, 1) % 12);
    AllocationBounds b;
    b.lambda = 0.5 + 19.5 * uniform01(hash_key(321, it, 2));
    b.upper = 1.0 + 5.0 * uniform01(hash_key(321, it, 3));
    b.lower = b.upper * (0.05 + 0.4 * uniform01(hash_key(321, it, 4)));
    b.granularity = 0.05 + 0.2 * uniform01(hash_key(321, it, 5));
    std::vector<double> ratios(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      ratios[static_cast<std::size_t>(k)] =
          0.01 + 0.99 * uniform01(hash_key(321, it, 10 + k));
    const auto ideal = allocate_from_ratios_exact(ratios, b);
    const auto grants = allocate_from_ratios(ratios, b);
    double sum_exact = 0, sum_grant = 0;
    for (int k = 0; k < n; ++k) {
      const double e = ideal[static_cast<std::size_t>(k)];
      const double g = grants[static_cast<std::size_t>(k)];
      sum_exact += e;
      sum_grant += g;
      const bool e_ok = e == 0.0 || (e >= b.lower - 1e-9 && e <= b.upper + 1e-9);
      const bool g_ok =
          g == 0.0 || (g >= b.lower - b.granularity - 1e-9 && g <= b.upper + 1e-9);
      if (!e_ok || !g_ok || g > e + 1e-9) {
        ok = false;
        why << "bounds violated at iteration " << it << "; ";
        it = 10000;
        break;
      }
      ++checked;
    }
    if (sum_exact > b.lambda + 1e-9 || sum_grant > b.lambda + 1e-9) {
      ok = false;
      why << "pool exceeded at iteration " << it << "; ";
      break;
    }
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 10.0;
  Outcome out;
  out.ok = ok;
  out.detail = why.str() + std::to_string(checked) + " grants checked, " +
               fmt(secs) + " s";
  return out;
}

// ---------------------------------------------------------------- criterion 3

Outcome gradient_check() {
  const auto t0 = Clock::now();
  double worst = 0;
  for (std::uint64_t net_i = 0; net_i < 100; ++net_i) {
    const int depth = 2 + static_cast<int>(hash_key(33, net_i, 1) % 3);
    std::vector<int> widths;
    for (int l = 0; l <= depth; ++l)
      widths.push_back(1 + static_cast<int>(hash_key(33, net_i, 2 + l) % 8));
    Mlp net(widths, hash_key(33, net_i, 50));

    std::vector<double> x(static_cast<std::size_t>(widths.front()));
    for (std::size_t k = 0; k < x.size(); ++k)
      x[k] = 2.0 * uniform01(hash_key(33, net_i, 100 + k)) - 1.0;
    std::vector<double> cot(static_cast<std::size_t>(widths.back()));
    for (std::size_t k = 0; k < cot.size(); ++k)
      cot[k] = 2.0 * uniform01(hash_key(33, net_i, 200 + k)) - 1.0;

    Mlp::Cache cache;
    net.forward(x, cache);
    Gradients grads = net.zero_gradients();
    net.backward(cache, cot, grads);

    const auto loss = [&]() {
      const auto y = net.forward(x);
      double s = 0;
      for (std::size_t k = 0; k < y.size(); ++k) s += cot[k] * y[k];
      return s;
    };
    const double h = 1e-5;
    for (std::size_t layer = 0; layer < net.weights().size(); ++layer) {
      for (std::size_t j = 0; j < net.weights()[layer].size(); ++j) {
        double& w = net.weights()[layer][j];
        const double keep = w;
        w = keep + h;
        const double up = loss();
        w = keep - h;
        const double down = loss();
        w = keep;
        const double fd = (up - down) / (2 * h);
        const double an = grads.w[layer][j];
        worst = std::max(worst, std::abs(an - fd) / std::max(1e-6, std::abs(fd)));
      }
      for (std::size_t j = 0; j < net.biases()[layer].size(); ++j) {
        double& b = net.biases()[layer][j];
        const double keep = b;
        b = keep + h;
        const double up = loss();
        b = keep - h;
        const double down = loss();
        b = keep;
        const double fd = (up - down) / (2 * h);
        const double an = grads.b[layer][j];
        worst = std::max(worst, std::abs(an - fd) / std::max(1e-6, std::abs(fd)));
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome out;
  out.ok = worst < 1e-4 && secs < 30.0;
  out.detail = "worst rel err " + fmt(worst) + " over 100 nets, " + fmt(secs) + " s";
  return out;
}

// ------------------------------------------------------------ criteria 4 & 5

SimEnv offline_env(const Config& cfg, std::uint64_t episode_seed,
                   std::optional<double> forced_latency) {
  Route route = make_route(cfg.route, hash_key(episode_seed, 11));
  BandwidthTrace bw = make_bandwidth(cfg.bandwidth.preset, cfg.bandwidth.csv_path,
                                     hash_key(episode_seed, 12));
  EnvConfig ec = env_config_from(cfg);
  ec.forced_latency_s = forced_latency;
  return SimEnv(std::move(route), std::move(bw), cfg.degradation, cfg.latency,
                ec, hash_key(episode_seed, 13));
}

struct EpisodeStats {
  double qon = 0;
  double distance = 0;
};

EpisodeStats run_local_episode(SimEnv& env) {
  const Action local{448, false, kLossless};
  env.reset();
  double qsum = 0;
  int steps = 0;
  EpisodeStats stats;
  while (!env.done()) {
    const StepResult r = env.step(local);
    qsum += r.reward;
    ++steps;
    stats.distance = r.info.distance_m;
  }
  stats.qon = steps > 0 ? qsum / steps : 0.0;
  return stats;
}

Outcome staleness_sweep() {
  const auto t0 = Clock::now();
  const Config cfg = default_config();
  const std::array<double, 4> forced{0.0, 0.25, 0.5, 1.0};
  int mono_q = 0, mono_d = 0, strict_tail = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    std::array<double, 4> q{}, d{};
    for (std::size_t fi = 0; fi < forced.size(); ++fi) {
      SimEnv env = offline_env(cfg, hash_key(4001, s), forced[fi]);
      const EpisodeStats stats = run_local_episode(env);
      q[fi] = stats.qon;
      d[fi] = stats.distance;
    }
    bool q_ok = true, d_ok = true;
    for (std::size_t fi = 1; fi < forced.size(); ++fi) {
      q_ok = q_ok && q[fi] <= q[fi - 1] + 1e-12;
      d_ok = d_ok && d[fi] <= d[fi - 1] + 1e-12;
    }
    mono_q += q_ok;
    mono_d += d_ok;
    strict_tail += q[2] > q[3];
  }
  const double secs = seconds_since(t0);
  Outcome out;
  out.ok = mono_q >= 9 && mono_d >= 9 && strict_tail == 10 && secs < 120.0;
  out.detail = "qon monotone " + std::to_string(mono_q) + "/10, distance monotone " +
               std::to_string(mono_d) + "/10, 0.5s>1.0s " +
               std::to_string(strict_tail) + "/10, " + fmt(secs) + " s";
  return out;
}

Outcome state_predicts_quality() {
  const auto t0 = Clock::now();
  const Config cfg = default_config();
  const Action local{448, false, kLossless};
  std::vector<double> cs, ds, qs;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const std::uint64_t ep = hash_key(5001, s);
    const Route route = make_route(cfg.route, hash_key(ep, 11));
    const std::uint64_t nav_seed = hash_key(ep, 13);
    SimEnv env = offline_env(cfg, ep, std::nullopt);
    env.reset();
    double start = 0.0;
    while (!env.done()) {
      const StepResult r = env.step(local);
      if (r.info.decisions > 1 && !r.info.dynamics_degenerate) {
        // One sample per window: the mean two-resolution complexity over the
        // window's frame span, the output spread the window produced, and the
        // window's QoN.
        double csum = 0;
        int n = 0;
        for (double t = start;
             t < std::min(start + cfg.sim.tau_s, route.duration());
             t += route.frame_period) {
          const NavOutput high = infer(route, t, kResolutions.front(),
                                       kLossless, cfg.degradation, nav_seed);
          const NavOutput low = infer(route, t, kResolutions.back(), kLossless,
                                      cfg.degradation, nav_seed);
          csum += complexity(high, low, cfg.sim.eie);
          ++n;
        }
        cs.push_back(csum / n);
        ds.push_back(r.state.d);
        qs.push_back(r.reward);
      }
      start = r.info.clock_s;
    }
  }
  const double r_c = pearson(cs, qs);
  const double r_d = pearson(ds, qs);
  const double secs = seconds_since(t0);
  Outcome out;
  out.ok = cs.size() >= 60 && r_c <= -0.5 && r_d <= -0.5 && secs < 120.0;
  out.detail = std::to_string(cs.size()) + " windows, corr(c,qon) " + fmt(r_c) +
               ", corr(d,qon) " + fmt(r_d) + ", " + fmt(secs) + " s";
  return out;
}

// ---------------------------------------------------------------- criterion 6

double median5(std::array<double, 5> v) {
  std::sort(v.begin(), v.end());
  return v[2];
}

Outcome learned_scheduler_wins(std::optional<A2cAgent>& trained) {
  const Config cfg = default_config();
  const auto t0 = Clock::now();
  A2cAgent agent = make_agent(cfg.train.agent, cfg.train.seed);
  train(agent, training_factory(cfg), cfg.train.agent.episodes, cfg.train.seed);
  const double train_s = seconds_since(t0);

  const SimFactory factory = eval_factory(cfg);
  const std::array<std::uint64_t, 5> seeds{601, 602, 603, 604, 605};
  std::array<double, 5> vs_local{}, vs_offload{}, vs_dynamic{};
  double worst_gap = 1e9;
  const PolicyFn pol_agent = agent_policy(agent);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const double q_agent =
        evaluate(pol_agent, factory, cfg.eval.episodes, seeds[i]).mean_qon;
    const double q_local =
        evaluate(baseline_policy(BaselineKind::Local), factory, cfg.eval.episodes,
                 seeds[i])
            .mean_qon;
    const double q_offload =
        evaluate(baseline_policy(BaselineKind::Offload), factory,
                 cfg.eval.episodes, seeds[i])
            .mean_qon;
    const double q_dynamic =
        evaluate(baseline_policy(BaselineKind::Dynamic), factory,
                 cfg.eval.episodes, seeds[i])
            .mean_qon;
    vs_local[i] = q_agent - q_local;
    vs_offload[i] = q_agent - q_offload;
    vs_dynamic[i] = q_agent - q_dynamic;
    worst_gap = std::min(
        worst_gap, q_agent - std::max({q_local, q_offload, q_dynamic}));
  }
  const double med_local = median5(vs_local);
  const double med_offload = median5(vs_offload);
  const double med_dynamic = median5(vs_dynamic);

  Outcome out;
  out.ok = train_s < 900.0 && med_local >= 0.03 && med_offload >= 0.03 &&
           med_dynamic >= 0.03 && worst_gap >= -0.01;
  out.detail = "train " + fmt(train_s) + " s; median lead vs local " +
               fmt(med_local) + ", offload " + fmt(med_offload) + ", dynamic " +
               fmt(med_dynamic) + "; worst per-seed gap " + fmt(worst_gap);
  trained = std::move(agent);
  return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome ablations(const std::optional<A2cAgent>& trained) {
  if (!trained) return {false, "no trained agent from criterion 6"};
  const Config cfg = default_config();

  Config cfg_raw = cfg;
  cfg_raw.train.agent.eie_enabled = false;
  A2cAgent raw = make_agent(cfg_raw.train.agent, cfg_raw.train.seed);
  train(raw, training_factory(cfg_raw), cfg_raw.train.agent.episodes,
        cfg_raw.train.seed);

  Config cfg_lat = cfg;
  cfg_lat.train.agent.reward_mode = RewardMode::NegativeLatency;
  A2cAgent lat = make_agent(cfg_lat.train.agent, cfg_lat.train.seed);
  train(lat, training_factory(cfg_lat), cfg_lat.train.agent.episodes,
        cfg_lat.train.seed);

  const int episodes = 15;
  const std::uint64_t seed = 701;
  const EvalSummary e_enc =
      evaluate(agent_policy(*trained), eval_factory(cfg), episodes, seed);
  const EvalSummary e_raw =
      evaluate(agent_policy(raw), eval_factory(cfg_raw), episodes, seed);
  const EvalSummary e_lat =
      evaluate(agent_policy(lat), eval_factory(cfg_lat), episodes, seed);

  Outcome out;
  out.ok = e_enc.mean_qon >= e_raw.mean_qon &&
           e_lat.mean_latency_s <= e_enc.mean_latency_s &&
           e_enc.mean_qon >= e_lat.mean_qon;
  out.detail = "qon encoded " + fmt(e_enc.mean_qon) + " vs raw " +
               fmt(e_raw.mean_qon) + "; latency-trained " +
               fmt(e_lat.mean_latency_s) + " s vs qon-trained " +
               fmt(e_enc.mean_latency_s) + " s (qon " + fmt(e_lat.mean_qon) + ")";
  return out;
}

// ---------------------------------------------------------------- criterion 8

Outcome fleet_strategy_ordering() {
  const auto t0 = Clock::now();
  const Config cfg = default_config();
  const std::array<FleetStrategy, 4> strategies{
      FleetStrategy::A3d, FleetStrategy::NoBounds, FleetStrategy::Even,
      FleetStrategy::Agnostic};
  // Fleet QoN is a sample mean over stochastic runs; pairs whose true means
  // coincide (a3d vs no-bounds once bounds stop binding, even vs agnostic once
  // the misreported pool stops changing decisions) land within sampling noise
  // of each other. kTie absorbs those statistical ties; it is several times
  // smaller than the structural gaps the ordering is about.
  const int kSeeds = 200;
  const double kTie = 0.005;
  bool ok = true;
  std::ostringstream detail;
  for (const double lambda : {4.0, 8.0, 12.0}) {
    std::array<double, 4> mean{};
    for (std::size_t si = 0; si < strategies.size(); ++si) {
      double acc = 0;
      for (int seed = 0; seed < kSeeds; ++seed) {
        FleetConfig fc;
        fc.bounds = cfg.fleet.bounds;
        fc.bounds.lambda = lambda;
        fc.strategy = strategies[si];
        fc.termination = FleetTermination::AllCrash;
        fc.allocation_period_s = cfg.fleet.allocation_period_s;
        fc.regression = cfg.fleet.regression;
        auto envs = make_fleet_envs(
            cfg, hash_key(8001, static_cast<std::uint64_t>(lambda),
                          static_cast<std::uint64_t>(seed)));
        const FleetResult r = run_fleet(
            std::move(envs), baseline_policy(BaselineKind::Dynamic), fc);
        acc += r.mean_qon;
      }
      mean[si] = acc / kSeeds;
    }
    detail << "lambda " << lambda << ": a3d " << fmt(mean[0]) << ", no-bounds "
           << fmt(mean[1]) << ", even " << fmt(mean[2]) << ", agnostic "
           << fmt(mean[3]) << "; ";
    if (lambda < 12.0) {
      ok = ok && mean[0] >= mean[1] - kTie && mean[1] >= mean[2] - kTie &&
           mean[2] >= mean[3] - kTie;
    } else {
      ok = ok && std::abs(mean[0] - mean[1]) <= 0.01;
    }
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 300.0;
  Outcome out;
  out.ok = ok;
  out.detail = detail.str() + fmt(secs) + " s";
  return out;
}

// ---------------------------------------------------------------- criterion 9

Outcome inference_and_allocation_speed() {
  const A2cConfig agent_cfg;
  const A2cAgent agent = make_agent(agent_cfg, 1);
  const int kCalls = 10000;
  volatile int sink = 0;
  const auto t0 = Clock::now();
  for (std::uint64_t i = 0; i < kCalls; ++i) {
    const std::array<double, 4> obs{uniform01(hash_key(91, i, 1)),
                                    uniform01(hash_key(91, i, 2)),
                                    uniform01(hash_key(91, i, 3)),
                                    uniform01(hash_key(91, i, 4))};
    sink = sink + act(agent, obs, ActMode::Greedy, 0);
  }
  const double act_ms = seconds_since(t0) * 1000.0 / kCalls;

  AllocationProblem problem;
  problem.regression = {0.29, -1.78, 0.01, 1.0};
  problem.bounds.lambda = 400.0;
  for (std::uint64_t i = 0; i < 1000; ++i)
    problem.bandwidth_kbps.push_back(100.0 +
                                     12000.0 * uniform01(hash_key(92, i)));
  const auto t1 = Clock::now();
  const auto grants = allocate(problem);
  const double alloc_ms = seconds_since(t1) * 1000.0;

  Outcome out;
  out.ok = act_ms < 5.0 && alloc_ms < 50.0 && grants.size() == 1000 && sink >= 0;
  out.detail = "act " + fmt(act_ms) + " ms/call, allocate(1000) " +
               fmt(alloc_ms) + " ms";
  return out;
}

// --------------------------------------------------------------- criterion 10

std::string slurp(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return "<missing " + path + ">";
  std::string data;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) data.append(buf, got);
  std::fclose(f);
  return data;
}

Outcome cli_determinism() {
  const std::string root = "acceptance_cli_out";
  std::filesystem::remove_all(root);
  const auto cli = [&](const std::string& args) {
    const std::string cmd =
        std::string(EDGENAV_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return status != -1 && WEXITSTATUS(status) == 0;
  };
  bool ok = true;
  std::ostringstream why;

  ok = ok && cli("gen-traces --seed 3 --out " + root + "/g1");
  ok = ok && cli("gen-traces --seed 3 --out " + root + "/g2");
  for (const char* name : {"route.csv", "bandwidth_b1.csv", "bandwidth_b4.csv"})
    if (slurp(root + "/g1/" + name) != slurp(root + "/g2/" + name)) {
      ok = false;
      why << name << " differs; ";
    }

  ok = ok && cli("eval --policy dynamic --episodes 2 --seed 5 --out " + root + "/e1");
  ok = ok && cli("eval --policy dynamic --episodes 2 --seed 5 --out " + root + "/e2");
  for (const char* name : {"episodes.csv", "decisions.csv", "summary.csv"})
    if (slurp(root + "/e1/" + name) != slurp(root + "/e2/" + name)) {
      ok = false;
      why << name << " differs; ";
    }

  ok = ok && cli("train --episodes 2 --seed 2 --out " + root + "/t1");
  ok = ok && cli("train --episodes 2 --seed 2 --out " + root + "/t2");
  if (slurp(root + "/t1/training_log.csv") != slurp(root + "/t2/training_log.csv")) {
    ok = false;
    why << "training_log.csv differs; ";
  }
  if (slurp(root + "/t1/agent.ckpt") != slurp(root + "/t2/agent.ckpt")) {
    ok = false;
    why << "agent.ckpt differs; ";
  }
  std::filesystem::remove_all(root);
  Outcome out;
  out.ok = ok;
  out.detail = ok ? "reruns byte-identical" : why.str();
  return out;
}

int g_failures = 0;

void run_criterion(int id, const std::string& label,
                   const std::function<Outcome()>& fn) {
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] criterion %d: %s -- %s\n", out.ok ? "PASS" : "FAIL", id,
              label.c_str(), out.detail.c_str());
  std::fflush(stdout);
  if (!out.ok) ++g_failures;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  std::optional<A2cAgent> trained;

  run_criterion(1, "closed-form metrics match independent oracles",
                closed_form_oracles);
  run_criterion(2, "allocator reproduces worked examples and respects bounds",
                allocator_fixtures);
  run_criterion(3, "backprop matches finite differences", gradient_check);
  run_criterion(4, "decision staleness degrades navigation", staleness_sweep);
  run_criterion(5, "encoded state predicts window quality", state_predicts_quality);
  run_criterion(6, "trained scheduler beats every baseline",
                [&] { return learned_scheduler_wins(trained); });
  run_criterion(7, "state encoding and reward ablations hold",
                [&] { return ablations(trained); });
  run_criterion(8, "allocation strategies order as expected",
                fleet_strategy_ordering);
  run_criterion(9, "inference and allocation meet latency budgets",
                inference_and_allocation_speed);
  run_criterion(10, "command line runs are reproducible", cli_determinism);

  std::printf("%d/10 criteria passed in %.0f s\n", 10 - g_failures,
              seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
