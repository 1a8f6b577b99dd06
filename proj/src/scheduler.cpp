#include "edgenav/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "edgenav/errors.hpp"
#include "edgenav/hashrand.hpp"

namespace edgenav {

Action decode_action(int index) {
  if (index < 0 || index >= kActionCount)
    throw ValidationError("action index out of range: " + std::to_string(index));
  if (index < 3) return Action{kResolutions[index], false, kLossless};
  const int e = index - 3;
  return Action{kResolutions[e / 3], true, kQualities[e % 3]};
}

int encode_action(const Action& action) {
  for (int i = 0; i < kActionCount; ++i)
    if (decode_action(i) == action) return i;
  throw ValidationError("action is not in the discrete set: " + action_token(action));
}

A2cAgent make_agent(const A2cConfig& config, std::uint64_t seed) {
  if (config.actor_widths.front() != 4 || config.critic_widths.front() != 4)
    throw ValidationError("agent networks take the 4-dimensional observation");
  if (config.actor_widths.back() != kActionCount)
    throw ValidationError("actor must emit one logit per action");
  if (config.critic_widths.back() != 1)
    throw ValidationError("critic must emit a single value");
  if (config.gamma < 0 || config.gamma > 1) throw ValidationError("gamma must be in [0, 1]");
  if (config.lr <= 0) throw ValidationError("learning rate must be positive");

  A2cAgent agent;
  agent.config = config;
  agent.actor = Mlp(config.actor_widths, hash_key(seed, 1));
  agent.critic = Mlp(config.critic_widths, hash_key(seed, 2));
  agent.actor_opt = RmsProp::for_net(agent.actor, config.lr);
  agent.critic_opt = RmsProp::for_net(agent.critic, config.lr);
  agent.actor_opt.decay = config.rms_decay;
  agent.actor_opt.eps = config.rms_eps;
  agent.critic_opt.decay = config.rms_decay;
  agent.critic_opt.eps = config.rms_eps;
  return agent;
}

int act(const A2cAgent& agent, const std::array<double, 4>& obs, ActMode mode,
        std::uint64_t seed) {
  const std::vector<double> logits =
      agent.actor.forward(std::vector<double>(obs.begin(), obs.end()));
  if (mode == ActMode::Greedy) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(logits.size()); ++i)
      if (logits[i] > logits[best]) best = i;
    return best;
  }
  const std::vector<double> probs = softmax(logits);
  const double u = uniform01(hash_key(seed, 0x5eedULL));
  double acc = 0;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return static_cast<int>(probs.size()) - 1;
}

std::array<double, 4> SimRolloutEnv::reset() {
  const SchedulerState st = env_.reset();
  return eie_ ? observe_encoded(st, env_.config().caps)
              : observe_raw(st, env_.config().caps);
}

RolloutStep SimRolloutEnv::step(int action_index) {
  const StepResult r = env_.step(decode_action(action_index));
  RolloutStep out;
  out.obs = eie_ ? observe_encoded(r.state, env_.config().caps)
                 : observe_raw(r.state, env_.config().caps);
  out.reward = r.reward;
  out.mean_latency_s = r.info.mean_latency_s;
  out.done = r.done;
  return out;
}

namespace {

constexpr int kMaxEpisodeSteps = 100000;

void check_finite(double v, const char* what, int episode, int t) {
  if (!std::isfinite(v))
    throw TrainingDivergedError(std::string(what) + " became non-finite at episode " +
                                std::to_string(episode) + ", step " + std::to_string(t));
}

}  // namespace

TrainResult train(A2cAgent& agent, const EnvFactory& make_env, int episodes,
                  std::uint64_t seed) {
  if (episodes < 0) throw ValidationError("episode count must be non-negative");
  TrainResult result;
  result.episode_rewards.reserve(static_cast<std::size_t>(episodes));

  for (int ep = 0; ep < episodes; ++ep) {
    const std::uint64_t ep_seed = hash_key(seed, static_cast<std::uint64_t>(ep), 0xe9);
    std::unique_ptr<RolloutEnv> env = make_env(ep_seed);

    std::vector<std::array<double, 4>> states;
    std::vector<int> actions;
    std::vector<double> rewards;

    std::array<double, 4> obs = env->reset();
    for (int t = 0; t < kMaxEpisodeSteps; ++t) {
      const int a = act(agent, obs, ActMode::Sample,
                        hash_key(ep_seed, static_cast<std::uint64_t>(t), 0xac));
      states.push_back(obs);
      actions.push_back(a);
      const RolloutStep step = env->step(a);
      const double r = agent.config.reward_mode == RewardMode::Qon
                           ? step.reward
                           : -step.mean_latency_s;
      check_finite(r, "reward", ep, t);
      rewards.push_back(r);
      obs = step.obs;
      if (step.done) break;
      if (t + 1 == kMaxEpisodeSteps)
        throw ContractError("episode did not terminate within the step cap");
    }

    const std::size_t n = rewards.size();
    std::vector<double> returns(n);
    double running = 0;
    for (std::size_t t = n; t-- > 0;) {
      running = rewards[t] + agent.config.gamma * running;
      returns[t] = running;
    }

    Gradients actor_grads = agent.actor.zero_gradients();
    Gradients critic_grads = agent.critic.zero_gradients();

    double reward_sum = 0;
    for (std::size_t t = 0; t < n; ++t) {
      reward_sum += rewards[t];
      const std::vector<double> x(states[t].begin(), states[t].end());

      Mlp::Cache critic_cache;
      const double value = agent.critic.forward(x, critic_cache)[0];
      check_finite(value, "critic value", ep, static_cast<int>(t));
      const double advantage = returns[t] - value;

      Mlp::Cache actor_cache;
      const std::vector<double> logits = agent.actor.forward(x, actor_cache);
      const std::vector<double> probs = softmax(logits);

      double entropy = 0;
      for (double p : probs)
        if (p > 0) entropy -= p * std::log(p);
      check_finite(entropy, "policy entropy", ep, static_cast<int>(t));

      // d/dlogits of [-log pi(a) * A - entropy_coef * H]
      std::vector<double> d_logits(probs.size());
      for (std::size_t k = 0; k < probs.size(); ++k) {
        const double onehot = k == static_cast<std::size_t>(actions[t]) ? 1.0 : 0.0;
        const double d_pg = advantage * (probs[k] - onehot);
        const double d_ent = probs[k] * (std::log(std::max(probs[k], 1e-300)) + entropy);
        d_logits[k] = d_pg + agent.config.entropy_coef * d_ent;
        check_finite(d_logits[k], "actor gradient", ep, static_cast<int>(t));
      }
      agent.actor.backward(actor_cache, d_logits, actor_grads);

      // d/dV of value_coef * (R - V)^2
      const std::vector<double> d_value{-2.0 * agent.config.value_coef * advantage};
      agent.critic.backward(critic_cache, d_value, critic_grads);
    }

    if (n > 0) {
      rmsprop_step(agent.actor_opt, agent.actor, actor_grads);
      rmsprop_step(agent.critic_opt, agent.critic, critic_grads);
    }
    result.episode_rewards.push_back(n > 0 ? reward_sum / static_cast<double>(n) : 0.0);
  }
  return result;
}

EvalSummary evaluate(const PolicyFn& policy, const SimFactory& make_env,
                     int episodes, std::uint64_t seed, const EpisodeHook& hook) {
  if (episodes <= 0) throw ValidationError("evaluation needs at least one episode");
  EvalSummary summary;
  for (int ep = 0; ep < episodes; ++ep) {
    SimEnv env = make_env(hash_key(seed, static_cast<std::uint64_t>(ep), 0xeb));
    SchedulerState st = env.reset();
    EvalEpisode out;
    double reward_sum = 0;
    int steps = 0;
    int offload_steps = 0;
    bool done = false;
    while (!done) {
      const Action a = policy(env, st);
      const StepResult r = env.step(a);
      reward_sum += r.reward;
      ++steps;
      if (a.edge) ++offload_steps;
      st = r.state;
      done = r.done;
      out.crashed = r.info.crashed;
      out.distance_m = r.info.distance_m;
    }
    double latency_sum = 0;
    for (const auto& rec : env.records()) latency_sum += rec.latency_s;
    out.decisions = static_cast<int>(env.records().size());
    out.mean_latency_s = out.decisions > 0 ? latency_sum / out.decisions : 0.0;
    out.qon = steps > 0 ? reward_sum / steps : 0.0;
    out.offload_ratio = steps > 0 ? static_cast<double>(offload_steps) / steps : 0.0;
    if (hook) hook(ep, env, out);
    summary.episodes.push_back(out);
  }
  const auto n = static_cast<double>(summary.episodes.size());
  for (const auto& e : summary.episodes) {
    summary.mean_qon += e.qon / n;
    summary.mean_latency_s += e.mean_latency_s / n;
    summary.mean_distance_m += e.distance_m / n;
    summary.offload_ratio += e.offload_ratio / n;
    summary.crash_rate += (e.crashed ? 1.0 : 0.0) / n;
  }
  return summary;
}

PolicyFn agent_policy(const A2cAgent& agent) {
  return [&agent](const SimEnv& env, const SchedulerState& st) {
    const std::array<double, 4> obs = agent.config.eie_enabled
                                          ? observe_encoded(st, env.config().caps)
                                          : observe_raw(st, env.config().caps);
    return decode_action(act(agent, obs, ActMode::Greedy, 0));
  };
}

PolicyFn baseline_policy(BaselineKind kind) {
  return [kind](const SimEnv& env, const SchedulerState& st) {
    return baseline_action(kind, env.latency_profile(), st.b, st.s);
  };
}

namespace {
constexpr char kCheckpointMagic[] = "edgenav-agent";
constexpr int kCheckpointVersion = 1;
}  // namespace

void save_agent(const std::string& path, const A2cAgent& agent) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write checkpoint: " + path);
  out << kCheckpointMagic << " " << kCheckpointVersion << "\n";
  const A2cConfig& c = agent.config;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g %.17g %.17g\n", c.lr, c.gamma,
                c.entropy_coef, c.value_coef, c.rms_decay, c.rms_eps);
  out << buf;
  out << c.episodes << " " << (c.eie_enabled ? 1 : 0) << " "
      << (c.reward_mode == RewardMode::Qon ? 0 : 1) << "\n";
  save_mlp(out, agent.actor);
  save_mlp(out, agent.critic);
  save_rmsprop(out, agent.actor_opt);
  save_rmsprop(out, agent.critic_opt);
}

A2cAgent load_agent(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint: " + path);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kCheckpointMagic)
    throw FormatError("not an agent checkpoint: " + path);
  if (version != kCheckpointVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  A2cAgent agent;
  A2cConfig& c = agent.config;
  int eie = 0, mode = 0;
  if (!(in >> c.lr >> c.gamma >> c.entropy_coef >> c.value_coef >> c.rms_decay >>
        c.rms_eps >> c.episodes >> eie >> mode))
    throw FormatError("checkpoint header truncated: " + path);
  c.eie_enabled = eie != 0;
  c.reward_mode = mode == 0 ? RewardMode::Qon : RewardMode::NegativeLatency;
  agent.actor = load_mlp(in);
  agent.critic = load_mlp(in);
  agent.actor_opt = load_rmsprop(in);
  agent.critic_opt = load_rmsprop(in);
  c.actor_widths = agent.actor.widths();
  c.critic_widths = agent.critic.widths();
  if (agent.actor.output_size() != kActionCount)
    throw FormatError("checkpoint actor does not match the action set");
  return agent;
}

}  // namespace edgenav
