#include "edgenav/config.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "edgenav/errors.hpp"

namespace edgenav {

namespace {

using nlohmann::json;

json caps_to_json(const ObsCaps& caps) {
  return {{"c", caps.c_cap}, {"d", caps.d_cap}, {"b_kbps", caps.b_cap}, {"s_cores", caps.s_cap}};
}

json sim_to_json(const SimSection& s) {
  return {
      {"tau_s", s.tau_s},
      {"episode_length_s", s.episode_length_s},
      {"epsilon", s.epsilon},
      {"v_max", s.v_max},
      {"crash", {{"epsilon_crash", s.crash.epsilon_crash}, {"consecutive", s.crash.consecutive}}},
      {"caps", caps_to_json(s.caps)},
      {"eie", {{"alpha", s.eie.alpha}, {"beta", s.eie.beta}}},
      {"probe_burst_frames", s.probe_burst_frames},
      {"edge_cores", s.edge_cores},
  };
}

json degradation_to_json(const DegradationProfile& p) {
  json rows;
  for (std::size_t r = 0; r < kResolutions.size(); ++r) {
    json row = {{"bias", json::array()},
                {"noise_theta", json::array()},
                {"noise_p", json::array()}};
    for (std::size_t q = 0; q < kQualities.size(); ++q) {
      row["bias"].push_back(p.cells[r][q].bias);
      row["noise_theta"].push_back(p.cells[r][q].noise_theta);
      row["noise_p"].push_back(p.cells[r][q].noise_p);
    }
    rows[std::to_string(kResolutions[r])] = row;
  }
  return {{"rows", rows},
          {"scene_sensitivity", p.scene_sensitivity},
          {"slope_ref", p.slope_ref}};
}

json latency_to_json(const LatencyProfile& p) {
  json local;
  for (const auto& [r, s] : p.local_compute_s) local[std::to_string(r)] = s;
  json anchors;
  for (const auto& [r, list] : p.edge_anchors) {
    json cores = json::array();
    json seconds = json::array();
    for (const auto& a : list) {
      cores.push_back(a.cores);
      seconds.push_back(a.seconds);
    }
    anchors[std::to_string(r)] = {{"cores", cores}, {"seconds", seconds}};
  }
  json payload;
  for (const auto& [key, kb] : p.payload_kb)
    payload[std::to_string(key.first)][std::to_string(key.second)] = kb;
  return {{"fixed_overhead_s", p.fixed_overhead_s},
          {"propagation_s", p.propagation_s},
          {"local_compute_s", local},
          {"edge_anchors", anchors},
          {"payload_kb", payload}};
}

json agent_to_json(const A2cConfig& a) {
  return {
      {"actor_widths", a.actor_widths},
      {"critic_widths", a.critic_widths},
      {"lr", a.lr},
      {"gamma", a.gamma},
      {"entropy_coef", a.entropy_coef},
      {"value_coef", a.value_coef},
      {"rms_decay", a.rms_decay},
      {"rms_eps", a.rms_eps},
      {"episodes", a.episodes},
      {"eie", a.eie_enabled},
      {"reward", a.reward_mode == RewardMode::Qon ? "qon" : "latency"},
  };
}

json config_to_json_tree(const Config& c) {
  return {
      {"sim", sim_to_json(c.sim)},
      {"degradation", degradation_to_json(c.degradation)},
      {"latency", latency_to_json(c.latency)},
      {"route",
       {{"preset", c.route.preset},
        {"csv_path", c.route.csv_path},
        {"noise_scale", c.route.noise_scale}}},
      {"bandwidth", {{"preset", c.bandwidth.preset}, {"csv_path", c.bandwidth.csv_path}}},
      {"train",
       {{"agent", agent_to_json(c.train.agent)},
        {"route_preset", c.train.route_preset},
        {"bandwidth_preset", c.train.bandwidth_preset},
        {"cores_min", c.train.cores_min},
        {"cores_max", c.train.cores_max},
        {"seed", c.train.seed}}},
      {"eval", {{"episodes", c.eval.episodes}, {"seed", c.eval.seed}}},
      {"fleet",
       {{"drones", c.fleet.drones},
        {"lambda", c.fleet.bounds.lambda},
        {"upper", c.fleet.bounds.upper},
        {"lower", c.fleet.bounds.lower},
        {"granularity", c.fleet.bounds.granularity},
        {"strategy", c.fleet.strategy},
        {"termination", c.fleet.termination},
        {"allocation_period_s", c.fleet.allocation_period_s},
        {"regression",
         {{"a", c.fleet.regression.a},
          {"c", c.fleet.regression.c},
          {"f_min", c.fleet.regression.f_min},
          {"f_max", c.fleet.regression.f_max}}},
        {"bandwidth_presets", c.fleet.bandwidth_presets},
        {"seed", c.fleet.seed}}},
      {"seed", c.seed},
  };
}

template <typename T>
void take(const json& node, const char* key, T& out) {
  if (node.contains(key)) node.at(key).get_to(out);
}

void config_from_json_tree(const json& j, Config& c) {
  if (j.contains("sim")) {
    const json& s = j.at("sim");
    take(s, "tau_s", c.sim.tau_s);
    take(s, "episode_length_s", c.sim.episode_length_s);
    take(s, "epsilon", c.sim.epsilon);
    take(s, "v_max", c.sim.v_max);
    if (s.contains("crash")) {
      take(s.at("crash"), "epsilon_crash", c.sim.crash.epsilon_crash);
      take(s.at("crash"), "consecutive", c.sim.crash.consecutive);
    }
    if (s.contains("caps")) {
      take(s.at("caps"), "c", c.sim.caps.c_cap);
      take(s.at("caps"), "d", c.sim.caps.d_cap);
      take(s.at("caps"), "b_kbps", c.sim.caps.b_cap);
      take(s.at("caps"), "s_cores", c.sim.caps.s_cap);
    }
    if (s.contains("eie")) {
      take(s.at("eie"), "alpha", c.sim.eie.alpha);
      take(s.at("eie"), "beta", c.sim.eie.beta);
    }
    take(s, "probe_burst_frames", c.sim.probe_burst_frames);
    take(s, "edge_cores", c.sim.edge_cores);
  }
  if (j.contains("degradation")) {
    const json& d = j.at("degradation");
    take(d, "scene_sensitivity", c.degradation.scene_sensitivity);
    take(d, "slope_ref", c.degradation.slope_ref);
    if (d.contains("rows")) {
      for (std::size_t r = 0; r < kResolutions.size(); ++r) {
        const std::string key = std::to_string(kResolutions[r]);
        if (!d.at("rows").contains(key)) continue;
        const json& row = d.at("rows").at(key);
        for (std::size_t q = 0; q < kQualities.size(); ++q) {
          if (row.contains("bias")) c.degradation.cells[r][q].bias = row.at("bias").at(q);
          if (row.contains("noise_theta"))
            c.degradation.cells[r][q].noise_theta = row.at("noise_theta").at(q);
          if (row.contains("noise_p"))
            c.degradation.cells[r][q].noise_p = row.at("noise_p").at(q);
        }
      }
    }
  }
  if (j.contains("latency")) {
    const json& l = j.at("latency");
    take(l, "fixed_overhead_s", c.latency.fixed_overhead_s);
    take(l, "propagation_s", c.latency.propagation_s);
    if (l.contains("local_compute_s"))
      for (const auto& [key, value] : l.at("local_compute_s").items())
        c.latency.local_compute_s[std::stoi(key)] = value.get<double>();
    if (l.contains("edge_anchors")) {
      for (const auto& [key, value] : l.at("edge_anchors").items()) {
        std::vector<double> cores = value.at("cores");
        std::vector<double> seconds = value.at("seconds");
        if (cores.size() != seconds.size())
          throw ValidationError("edge anchor cores/seconds differ in length");
        std::vector<CoreAnchor> anchors;
        for (std::size_t i = 0; i < cores.size(); ++i)
          anchors.push_back({cores[i], seconds[i]});
        c.latency.edge_anchors[std::stoi(key)] = std::move(anchors);
      }
    }
    if (l.contains("payload_kb"))
      for (const auto& [r, row] : l.at("payload_kb").items())
        for (const auto& [q, kb] : row.items())
          c.latency.payload_kb[{std::stoi(r), std::stoi(q)}] = kb.get<double>();
  }
  if (j.contains("route")) {
    take(j.at("route"), "preset", c.route.preset);
    take(j.at("route"), "csv_path", c.route.csv_path);
    take(j.at("route"), "noise_scale", c.route.noise_scale);
  }
  if (j.contains("bandwidth")) {
    take(j.at("bandwidth"), "preset", c.bandwidth.preset);
    take(j.at("bandwidth"), "csv_path", c.bandwidth.csv_path);
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    if (t.contains("agent")) {
      const json& a = t.at("agent");
      take(a, "actor_widths", c.train.agent.actor_widths);
      take(a, "critic_widths", c.train.agent.critic_widths);
      take(a, "lr", c.train.agent.lr);
      take(a, "gamma", c.train.agent.gamma);
      take(a, "entropy_coef", c.train.agent.entropy_coef);
      take(a, "value_coef", c.train.agent.value_coef);
      take(a, "rms_decay", c.train.agent.rms_decay);
      take(a, "rms_eps", c.train.agent.rms_eps);
      take(a, "episodes", c.train.agent.episodes);
      take(a, "eie", c.train.agent.eie_enabled);
      if (a.contains("reward")) {
        const std::string r = a.at("reward");
        if (r == "qon")
          c.train.agent.reward_mode = RewardMode::Qon;
        else if (r == "latency")
          c.train.agent.reward_mode = RewardMode::NegativeLatency;
        else
          throw ValidationError("unknown reward mode: " + r);
      }
    }
    take(t, "route_preset", c.train.route_preset);
    take(t, "bandwidth_preset", c.train.bandwidth_preset);
    take(t, "cores_min", c.train.cores_min);
    take(t, "cores_max", c.train.cores_max);
    take(t, "seed", c.train.seed);
  }
  if (j.contains("eval")) {
    take(j.at("eval"), "episodes", c.eval.episodes);
    take(j.at("eval"), "seed", c.eval.seed);
  }
  if (j.contains("fleet")) {
    const json& f = j.at("fleet");
    take(f, "drones", c.fleet.drones);
    take(f, "lambda", c.fleet.bounds.lambda);
    take(f, "upper", c.fleet.bounds.upper);
    take(f, "lower", c.fleet.bounds.lower);
    take(f, "granularity", c.fleet.bounds.granularity);
    take(f, "strategy", c.fleet.strategy);
    take(f, "termination", c.fleet.termination);
    take(f, "allocation_period_s", c.fleet.allocation_period_s);
    if (f.contains("regression")) {
      take(f.at("regression"), "a", c.fleet.regression.a);
      take(f.at("regression"), "c", c.fleet.regression.c);
      take(f.at("regression"), "f_min", c.fleet.regression.f_min);
      take(f.at("regression"), "f_max", c.fleet.regression.f_max);
    }
    take(f, "bandwidth_presets", c.fleet.bandwidth_presets);
    take(f, "seed", c.fleet.seed);
  }
  take(j, "seed", c.seed);
}

void check_known_keys(const json& node, const json& reference, const std::string& prefix) {
  if (!node.is_object() || !reference.is_object()) return;
  for (const auto& [key, value] : node.items()) {
    if (!reference.contains(key))
      throw ValidationError("unknown config key: " + prefix + key);
    check_known_keys(value, reference.at(key), prefix + key + ".");
  }
}

}  // namespace

Config default_config() { return Config{}; }

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("config " + path + " is not valid JSON: " + e.what());
  }
  Config c;
  check_known_keys(j, config_to_json_tree(c), "");
  try {
    config_from_json_tree(j, c);
  } catch (const json::exception& e) {
    throw FormatError("config " + path + " has a wrong-typed field: " + e.what());
  }
  return c;
}

std::string config_to_json(const Config& config) {
  return config_to_json_tree(config).dump(2) + "\n";
}

std::string config_hash(const Config& config) {
  const std::string dump = config_to_json_tree(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(const std::string& dir, const std::string& command,
                    const Config& config, std::uint64_t seed) {
  json m = {
      {"command", command},
      {"config_hash", config_hash(config)},
      {"seed", seed},
      {"versions",
       {{"edgenav", "1.0.0"}, {"trace_format", 1}, {"checkpoint_format", 1}}},
  };
  const std::filesystem::path path = std::filesystem::path(dir) / "manifest.json";
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write manifest: " + path.string());
  out << m.dump(2) << "\n";
}

}  // namespace edgenav
