#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "edgenav/baselines.hpp"
#include "edgenav/env.hpp"
#include "edgenav/nnet.hpp"

namespace edgenav {

// Discrete action set: 3 onboard configurations ordered by descending
// resolution, then 9 offload configurations ordered by descending resolution
// and descending quality.
inline constexpr int kActionCount = 12;

Action decode_action(int index);
int encode_action(const Action& action);

enum class RewardMode { Qon, NegativeLatency };

struct A2cConfig {
  std::vector<int> actor_widths{4, 128, 128, kActionCount};
  std::vector<int> critic_widths{4, 64, 64, 1};
  double lr = 7e-4;
  double gamma = 0.99;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double rms_decay = 0.99;
  double rms_eps = 1e-5;
  int episodes = 25000;     // default training budget
  bool eie_enabled = true;  // encoded <c,d,b,s> state vs raw <theta,p,b,s>
  RewardMode reward_mode = RewardMode::Qon;
};

struct A2cAgent {
  A2cConfig config;
  Mlp actor;
  Mlp critic;
  RmsProp actor_opt;
  RmsProp critic_opt;
};

A2cAgent make_agent(const A2cConfig& config, std::uint64_t seed);

enum class ActMode { Greedy, Sample };

// Greedy: argmax logit, lowest index on ties. Sample: draw from
// softmax(logits), deterministic in seed.
int act(const A2cAgent& agent, const std::array<double, 4>& obs, ActMode mode,
        std::uint64_t seed);

// Environment surface the training loop needs; the simulator adapter and test
// doubles implement it.
struct RolloutStep {
  std::array<double, 4> obs{};
  double reward = 0;
  double mean_latency_s = 0;
  bool done = false;
};

class RolloutEnv {
 public:
  virtual ~RolloutEnv() = default;
  virtual std::array<double, 4> reset() = 0;
  virtual RolloutStep step(int action_index) = 0;
};

class SimRolloutEnv : public RolloutEnv {
 public:
  SimRolloutEnv(SimEnv env, bool eie_enabled)
      : env_(std::move(env)), eie_(eie_enabled) {}
  std::array<double, 4> reset() override;
  RolloutStep step(int action_index) override;
  SimEnv& sim() { return env_; }

 private:
  SimEnv env_;
  bool eie_;
};

using EnvFactory = std::function<std::unique_ptr<RolloutEnv>(std::uint64_t episode_seed)>;

struct TrainResult {
  std::vector<double> episode_rewards;  // mean per-step training reward
};

// Monte-Carlo advantage actor-critic: full-episode rollouts, discounted
// returns, one RMSProp update per episode per network.
TrainResult train(A2cAgent& agent, const EnvFactory& make_env, int episodes,
                  std::uint64_t seed);

struct EvalEpisode {
  double qon = 0;            // mean step reward
  double mean_latency_s = 0;  // decision-weighted
  double distance_m = 0;
  double offload_ratio = 0;  // fraction of steps spent offloading
  bool crashed = false;
  int decisions = 0;
};

struct EvalSummary {
  std::vector<EvalEpisode> episodes;
  double mean_qon = 0;
  double mean_latency_s = 0;
  double mean_distance_m = 0;
  double offload_ratio = 0;
  double crash_rate = 0;
};

using SimFactory = std::function<SimEnv(std::uint64_t episode_seed)>;
using PolicyFn = std::function<Action(const SimEnv&, const SchedulerState&)>;
// Called after each finished episode with its index, the env (for records)
// and the episode summary.
using EpisodeHook = std::function<void(int, const SimEnv&, const EvalEpisode&)>;

EvalSummary evaluate(const PolicyFn& policy, const SimFactory& make_env,
                     int episodes, std::uint64_t seed,
                     const EpisodeHook& hook = {});

PolicyFn agent_policy(const A2cAgent& agent);
PolicyFn baseline_policy(BaselineKind kind);

void save_agent(const std::string& path, const A2cAgent& agent);
A2cAgent load_agent(const std::string& path);

}  // namespace edgenav
