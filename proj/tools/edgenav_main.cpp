#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgenav/config.hpp"
#include "edgenav/errors.hpp"
#include "edgenav/fleet.hpp"
#include "edgenav/hashrand.hpp"
#include "edgenav/scenario.hpp"
#include "edgenav/scheduler.hpp"
#include "edgenav/traces.hpp"

namespace {

using namespace edgenav;

// EDGENAV_LOG=info|debug enables progress logging on stderr.
int log_level() {
  static const int level = [] {
    const char* v = std::getenv("EDGENAV_LOG");
    if (v == nullptr) return 0;
    const std::string s(v);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[edgenav] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::fprintf(stderr, "[edgenav] %s\n", msg.c_str());
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw ValidationError("cannot create output directory: " + dir);
}

std::ofstream open_csv(const std::string& dir, const std::string& name) {
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

Config load_or_default(const std::string& config_path) {
  return config_path.empty() ? default_config() : load_config(config_path);
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad " + what + " entry: " + item);
    }
  }
  if (out.empty()) throw ValidationError(what + " list is empty");
  return out;
}

PolicyFn make_policy(const std::string& name, const std::string& checkpoint,
                     std::optional<A2cAgent>& agent_slot) {
  if (name == "a2c") {
    if (checkpoint.empty())
      throw ValidationError("--policy a2c needs --checkpoint");
    agent_slot = load_agent(checkpoint);
    return agent_policy(*agent_slot);
  }
  if (name == "local") return baseline_policy(BaselineKind::Local);
  if (name == "offload") return baseline_policy(BaselineKind::Offload);
  if (name == "dynamic") return baseline_policy(BaselineKind::Dynamic);
  throw ValidationError("unknown policy: " + name);
}

void write_eval_outputs(const std::string& out_dir, const Config& config,
                        const PolicyFn& policy, const std::vector<double>& vmax_sweep,
                        std::uint64_t seed) {
  std::ofstream episodes_csv = open_csv(out_dir, "episodes.csv");
  episodes_csv << "v_max,episode,qon,mean_latency_s,distance_m,offload_ratio,crashed,decisions\n";
  std::ofstream decisions_csv = open_csv(out_dir, "decisions.csv");
  decisions_csv << "episode,t_capture_s,t_decide_s,theta_pre_rad,theta_gt_rad,p_pre,action,latency_s\n";
  std::ofstream summary_csv = open_csv(out_dir, "summary.csv");
  summary_csv << "v_max,episodes,mean_qon,mean_latency_s,mean_distance_m,offload_ratio,crash_rate\n";

  for (std::size_t vi = 0; vi < vmax_sweep.size(); ++vi) {
    Config run = config;
    run.sim.v_max = vmax_sweep[vi];
    // The decision stream does not depend on v_max, so per-decision rows are
    // emitted once, for the first sweep entry.
    const bool dump_decisions = vi == 0;
    const EpisodeHook hook = [&](int ep, const SimEnv& env, const EvalEpisode& summary) {
      episodes_csv << fmt(run.sim.v_max) << "," << ep << "," << fmt(summary.qon) << ","
                   << fmt(summary.mean_latency_s) << "," << fmt(summary.distance_m) << ","
                   << fmt(summary.offload_ratio) << "," << (summary.crashed ? 1 : 0) << ","
                   << summary.decisions << "\n";
      if (!dump_decisions) return;
      for (const DecisionRecord& rec : env.records()) {
        decisions_csv << ep << "," << fmt(rec.t_capture) << "," << fmt(rec.t_decide) << ","
                      << fmt(rec.theta_pre) << "," << fmt(rec.theta_gt) << ","
                      << fmt(rec.p_pre) << "," << action_token(rec.action) << ","
                      << fmt(rec.latency_s) << "\n";
      }
    };
    const EvalSummary summary =
        evaluate(policy, eval_factory(run), run.eval.episodes, seed, hook);
    summary_csv << fmt(run.sim.v_max) << "," << run.eval.episodes << ","
                << fmt(summary.mean_qon) << "," << fmt(summary.mean_latency_s) << ","
                << fmt(summary.mean_distance_m) << "," << fmt(summary.offload_ratio) << ","
                << fmt(summary.crash_rate) << "\n";
    log_info("eval v_max=" + fmt(run.sim.v_max) + " mean_qon=" + fmt(summary.mean_qon));
  }
}

int cmd_gen_traces(const Config& config, std::uint64_t seed, const std::string& out_dir) {
  ensure_dir(out_dir);
  const Route route = make_route(config.route, hash_key(seed, 51));
  save_route(route, out_dir + "/route.csv");
  log_info("wrote route.csv (" + std::to_string(route.frames.size()) + " frames)");
  for (std::size_t i = 0; i < config.fleet.bandwidth_presets.size(); ++i) {
    const std::string& preset = config.fleet.bandwidth_presets[i];
    const BandwidthTrace trace =
        generate_bandwidth(bandwidth_preset_spec(preset), hash_key(seed, 52, i));
    save_bandwidth_trace(trace, out_dir + "/bandwidth_" + preset + ".csv");
    log_info("wrote bandwidth_" + preset + ".csv");
  }
  write_manifest(out_dir, "gen-traces", config, seed);
  return 0;
}

int cmd_train(const Config& config, std::uint64_t seed, const std::string& out_dir) {
  ensure_dir(out_dir);
  A2cAgent agent = make_agent(config.train.agent, seed);
  const TrainResult result =
      train(agent, training_factory(config), config.train.agent.episodes, seed);

  std::ofstream curve = open_csv(out_dir, "training_log.csv");
  curve << "episode,mean_reward\n";
  for (std::size_t i = 0; i < result.episode_rewards.size(); ++i)
    curve << i << "," << fmt(result.episode_rewards[i]) << "\n";

  save_agent(out_dir + "/agent.ckpt", agent);
  write_manifest(out_dir, "train", config, seed);
  log_info("trained " + std::to_string(result.episode_rewards.size()) +
           " episodes, checkpoint at " + out_dir + "/agent.ckpt");
  return 0;
}

int cmd_eval(const Config& config, std::uint64_t seed, const std::string& out_dir,
             const std::string& policy_name, const std::string& checkpoint,
             const std::string& vmax_list) {
  ensure_dir(out_dir);
  std::optional<A2cAgent> agent;
  const PolicyFn policy = make_policy(policy_name, checkpoint, agent);
  const std::vector<double> sweep = vmax_list.empty()
                                        ? std::vector<double>{config.sim.v_max}
                                        : parse_list(vmax_list, "v_max");
  write_eval_outputs(out_dir, config, policy, sweep, seed);
  write_manifest(out_dir, "eval", config, seed);
  return 0;
}

int cmd_fleet(const Config& config, std::uint64_t seed, const std::string& out_dir,
              const std::string& policy_name, const std::string& checkpoint) {
  ensure_dir(out_dir);
  std::optional<A2cAgent> agent;
  const PolicyFn policy = make_policy(policy_name, checkpoint, agent);

  FleetConfig fleet;
  fleet.bounds = config.fleet.bounds;
  fleet.allocation_period_s = config.fleet.allocation_period_s;
  fleet.regression = config.fleet.regression;
  if (config.fleet.strategy == "a3d") fleet.strategy = FleetStrategy::A3d;
  else if (config.fleet.strategy == "even") fleet.strategy = FleetStrategy::Even;
  else if (config.fleet.strategy == "agnostic") fleet.strategy = FleetStrategy::Agnostic;
  else if (config.fleet.strategy == "no-bounds") fleet.strategy = FleetStrategy::NoBounds;
  else throw ValidationError("unknown fleet strategy: " + config.fleet.strategy);
  if (config.fleet.termination == "first-crash") fleet.termination = FleetTermination::FirstCrash;
  else if (config.fleet.termination == "all-crash") fleet.termination = FleetTermination::AllCrash;
  else throw ValidationError("unknown fleet termination: " + config.fleet.termination);

  const FleetResult result = run_fleet(make_fleet_envs(config, seed), policy, fleet);

  std::ofstream drones_csv = open_csv(out_dir, "drones.csv");
  drones_csv << "drone,bandwidth_preset,qon,mean_latency_s,distance_m,offload_ratio,crashed,decisions,steps\n";
  for (std::size_t i = 0; i < result.drones.size(); ++i) {
    const DroneResult& d = result.drones[i];
    const std::string& preset =
        config.fleet.bandwidth_presets[i % config.fleet.bandwidth_presets.size()];
    drones_csv << i << "," << preset << "," << fmt(d.qon) << "," << fmt(d.mean_latency_s)
               << "," << fmt(d.distance_m) << "," << fmt(d.offload_ratio) << ","
               << (d.crashed ? 1 : 0) << "," << d.decisions << "," << d.steps << "\n";
  }

  std::ofstream epochs_csv = open_csv(out_dir, "epochs.csv");
  epochs_csv << "time_s,drone,bandwidth_kbps,grant_cores\n";
  for (const AllocationEpoch& epoch : result.epochs)
    for (std::size_t i = 0; i < epoch.grants.size(); ++i)
      epochs_csv << fmt(epoch.time_s) << "," << i << "," << fmt(epoch.bandwidth_kbps[i])
                 << "," << fmt(epoch.grants[i]) << "\n";

  std::ofstream summary_csv = open_csv(out_dir, "summary.csv");
  summary_csv << "strategy,drones,lambda,mean_qon\n";
  summary_csv << config.fleet.strategy << "," << result.drones.size() << ","
              << fmt(config.fleet.bounds.lambda) << "," << fmt(result.mean_qon) << "\n";

  write_manifest(out_dir, "fleet", config, seed);
  log_info("fleet mean_qon=" + fmt(result.mean_qon));
  return 0;
}

int cmd_fit_regression(const Config& config, std::uint64_t seed, const std::string& out_dir,
                       const std::string& samples_path, const std::string& policy_name,
                       const std::string& checkpoint, const std::string& levels_list) {
  ensure_dir(out_dir);
  std::vector<double> bandwidths;
  std::vector<double> ratios;

  if (!samples_path.empty()) {
    std::ifstream in(samples_path);
    if (!in) throw ValidationError("cannot open samples: " + samples_path);
    std::string line;
    if (!std::getline(in, line) || line != "bandwidth_kbps,offloading_ratio")
      throw FormatError(samples_path + ": expected header bandwidth_kbps,offloading_ratio");
    int line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos)
        throw FormatError(samples_path + ":" + std::to_string(line_no) + ": expected 2 columns");
      try {
        bandwidths.push_back(std::stod(line.substr(0, comma)));
        ratios.push_back(std::stod(line.substr(comma + 1)));
      } catch (const std::exception&) {
        throw FormatError(samples_path + ":" + std::to_string(line_no) + ": bad number");
      }
    }
  } else {
    // Measure the policy's offload appetite at constant link rates.
    std::optional<A2cAgent> agent;
    const PolicyFn policy = make_policy(policy_name, checkpoint, agent);
    const std::vector<double> levels =
        parse_list(levels_list, "bandwidth level");
    for (double level : levels) {
      Config run = config;
      const SimFactory factory = [&run, level](std::uint64_t episode_seed) {
        Route route = make_route(run.route, hash_key(episode_seed, 11));
        BandwidthTrace trace;
        trace.samples.push_back({0.0, level});
        return SimEnv(std::move(route), std::move(trace), run.degradation, run.latency,
                      env_config_from(run), hash_key(episode_seed, 13));
      };
      const EvalSummary summary =
          evaluate(policy, factory, run.eval.episodes, hash_key(seed, 61, static_cast<std::uint64_t>(level)));
      bandwidths.push_back(level);
      ratios.push_back(summary.offload_ratio);
      log_debug("level " + fmt(level) + " kbps -> offload ratio " + fmt(summary.offload_ratio));
    }
  }

  const OffloadRegression reg = fit_regression(bandwidths, ratios);

  std::ofstream points_csv = open_csv(out_dir, "points.csv");
  points_csv << "bandwidth_kbps,offloading_ratio\n";
  for (std::size_t i = 0; i < bandwidths.size(); ++i)
    points_csv << fmt(bandwidths[i]) << "," << fmt(ratios[i]) << "\n";

  std::ofstream reg_csv = open_csv(out_dir, "regression.csv");
  reg_csv << "a,c,f_min,f_max\n";
  reg_csv << fmt(reg.a) << "," << fmt(reg.c) << "," << fmt(reg.f_min) << ","
          << fmt(reg.f_max) << "\n";

  write_manifest(out_dir, "fit-regression", config, seed);
  log_info("fit a=" + fmt(reg.a) + " c=" + fmt(reg.c));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edgenav: trace-driven edge-assisted drone navigation simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // --config/--out/--seed may follow the subcommand

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--config", config_path, "JSON config file; flags override its values")
      ->type_name("PATH");
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--seed", seed_flag, "override the command's seed");

  auto* gen = app.add_subcommand("gen-traces", "generate the route and bandwidth trace CSVs");

  auto* train_cmd = app.add_subcommand("train", "train the A2C scheduler");
  std::optional<int> episodes_flag;
  std::string reward_flag;
  std::optional<bool> eie_flag;
  train_cmd->add_option("--episodes", episodes_flag, "training episode budget");
  train_cmd->add_option("--reward", reward_flag, "qon | latency")
      ->check(CLI::IsMember({"qon", "latency"}));
  train_cmd->add_option("--eie", eie_flag, "1: encoded <c,d,b,s> state, 0: raw <theta,p,b,s>");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a policy on the configured scenario");
  std::string policy_name = "a2c";
  std::string checkpoint;
  std::string vmax_list;
  std::optional<int> eval_episodes_flag;
  eval_cmd->add_option("--policy", policy_name, "a2c | local | offload | dynamic")
      ->check(CLI::IsMember({"a2c", "local", "offload", "dynamic"}));
  eval_cmd->add_option("--checkpoint", checkpoint, "agent checkpoint (for --policy a2c)");
  eval_cmd->add_option("--vmax", vmax_list, "comma-separated v_max sweep, one summary row each");
  eval_cmd->add_option("--episodes", eval_episodes_flag, "evaluation episode count");

  auto* fleet_cmd = app.add_subcommand("fleet", "run the multi-drone simulation");
  std::string fleet_policy = "a2c";
  std::string fleet_checkpoint;
  std::string strategy_flag;
  std::optional<double> lambda_flag;
  std::optional<int> drones_flag;
  std::string termination_flag;
  fleet_cmd->add_option("--policy", fleet_policy, "a2c | local | offload | dynamic")
      ->check(CLI::IsMember({"a2c", "local", "offload", "dynamic"}));
  fleet_cmd->add_option("--checkpoint", fleet_checkpoint, "agent checkpoint (for --policy a2c)");
  fleet_cmd->add_option("--strategy", strategy_flag, "a3d | even | agnostic | no-bounds")
      ->check(CLI::IsMember({"a3d", "even", "agnostic", "no-bounds"}));
  fleet_cmd->add_option("--lambda", lambda_flag, "edge core pool size");
  fleet_cmd->add_option("--drones", drones_flag, "number of drones");
  fleet_cmd->add_option("--termination", termination_flag, "first-crash | all-crash")
      ->check(CLI::IsMember({"first-crash", "all-crash"}));

  auto* fit_cmd = app.add_subcommand("fit-regression",
                                     "fit the offload-ratio-vs-bandwidth curve");
  std::string samples_path;
  std::string fit_policy = "a2c";
  std::string fit_checkpoint;
  std::string levels_list = "250,500,1000,2000,4000,8000,12000";
  fit_cmd->add_option("--samples", samples_path,
                      "CSV of bandwidth_kbps,offloading_ratio pairs to fit");
  fit_cmd->add_option("--policy", fit_policy,
                      "policy to measure when no --samples are given")
      ->check(CLI::IsMember({"a2c", "local", "offload", "dynamic"}));
  fit_cmd->add_option("--checkpoint", fit_checkpoint,
                      "agent checkpoint (for --policy a2c)");
  fit_cmd->add_option("--levels", levels_list,
                      "constant bandwidth levels (kbps) for measurement runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Config config = load_or_default(config_path);

    if (gen->parsed()) {
      const std::uint64_t seed = seed_flag.value_or(config.seed);
      return cmd_gen_traces(config, seed, out_dir);
    }
    if (train_cmd->parsed()) {
      if (episodes_flag) {
        if (*episodes_flag < 0) throw ValidationError("--episodes must be non-negative");
        config.train.agent.episodes = *episodes_flag;
      }
      if (!reward_flag.empty())
        config.train.agent.reward_mode =
            reward_flag == "latency" ? RewardMode::NegativeLatency : RewardMode::Qon;
      if (eie_flag) config.train.agent.eie_enabled = *eie_flag;
      const std::uint64_t seed = seed_flag.value_or(config.train.seed);
      return cmd_train(config, seed, out_dir);
    }
    if (eval_cmd->parsed()) {
      if (eval_episodes_flag) {
        if (*eval_episodes_flag <= 0) throw ValidationError("--episodes must be positive");
        config.eval.episodes = *eval_episodes_flag;
      }
      const std::uint64_t seed = seed_flag.value_or(config.eval.seed);
      return cmd_eval(config, seed, out_dir, policy_name, checkpoint, vmax_list);
    }
    if (fleet_cmd->parsed()) {
      if (!strategy_flag.empty()) config.fleet.strategy = strategy_flag;
      if (!termination_flag.empty()) config.fleet.termination = termination_flag;
      if (lambda_flag) config.fleet.bounds.lambda = *lambda_flag;
      if (drones_flag) {
        if (*drones_flag < 1) throw ValidationError("--drones must be at least 1");
        config.fleet.drones = *drones_flag;
      }
      const std::uint64_t seed = seed_flag.value_or(config.fleet.seed);
      return cmd_fleet(config, seed, out_dir, fleet_policy, fleet_checkpoint);
    }
    if (fit_cmd->parsed()) {
      const std::uint64_t seed = seed_flag.value_or(config.seed);
      return cmd_fit_regression(config, seed, out_dir, samples_path, fit_policy,
                                fit_checkpoint, levels_list);
    }
    throw ValidationError("no command given");
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const OutOfRangeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 2;
  }
}
