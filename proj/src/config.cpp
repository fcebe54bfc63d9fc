#include "marl/config.hpp"

#include <fstream>
#include <set>

#include "marl/errors.hpp"

namespace marl {

using nlohmann::json;

const char* env_kind_name(EnvKind kind) {
  return kind == EnvKind::Pursuit ? "pursuit" : "market";
}

const char* agent_kind_name(AgentKind kind) { return kind == AgentKind::Ddpg ? "ddpg" : "cft"; }

void RunConfig::validate() const {
  if (agents.size() < 2) throw ConfigError("config: at least 2 agent slots required");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("config: gamma must be in (0, 1)");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("config: alpha must be in [0, 1)");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("config: tau must be in [0, 1]");
  if (actor_lr < 0.0 || critic_lr < 0.0)
    throw ConfigError("config: learning rates must be >= 0");
  if (noise_sigma < 0.0) throw ConfigError("config: noise_sigma must be >= 0");
  if (!(noise_decay > 0.0 && noise_decay <= 1.0))
    throw ConfigError("config: noise_decay must be in (0, 1]");
  if (batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
  if (replay_capacity < 1) throw ConfigError("config: replay_capacity must be >= 1");
  if (hidden < 1) throw ConfigError("config: hidden must be >= 1");
  if (k_intents < 1) throw ConfigError("config: k_intents must be >= 1");
  if (n_scenarios < 1) throw ConfigError("config: n_scenarios must be >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("config: epsilon must be in [0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("config: lambda must be in [0, 1]");
  if (!(temperature > 0.0)) throw ConfigError("config: temperature must be > 0");
  if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
  if (!calibration_csv.empty() && environment != EnvKind::Market)
    throw ConfigError("config: calibration_csv applies to the market environment only");
  try {
    if (environment == EnvKind::Pursuit) {
      PursuitConfig pc = pursuit;
      pc.n_pursuers = agents.size();
      pc.validate();
    } else {
      MarketConfig mc = market;
      mc.n_sellers = agents.size();
      mc.demand.resize(mc.n_sellers);
      mc.validate();
    }
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

AgentParams RunConfig::agent_params() const {
  AgentParams p;
  p.actor_lr = actor_lr;
  p.critic_lr = critic_lr;
  p.tau = tau;
  p.noise_sigma = noise_sigma;
  p.hidden = hidden;
  return p;
}

CftConfig RunConfig::cft_config() const {
  CftConfig c;
  c.k_intents = k_intents;
  c.n_scenarios = n_scenarios;
  c.epsilon = epsilon;
  c.lambda = lambda;
  c.temperature = temperature;
  c.mixture = mixture;
  return c;
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.contains(it.key()))
      throw ConfigError(std::string("config: unknown key '") + it.key() + "' in " + where);
}

template <typename T>
void read_into(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

PursuitConfig parse_pursuit(const json& j) {
  reject_unknown_keys(j,
                      {"n_evaders", "n_poisons", "capture_radius", "poison_radius", "max_speed",
                       "capture_reward", "poison_reward"},
                      "pursuit");
  PursuitConfig p;
  read_into(j, "n_evaders", p.n_evaders);
  read_into(j, "n_poisons", p.n_poisons);
  read_into(j, "capture_radius", p.capture_radius);
  read_into(j, "poison_radius", p.poison_radius);
  read_into(j, "max_speed", p.max_speed);
  read_into(j, "capture_reward", p.capture_reward);
  read_into(j, "poison_reward", p.poison_reward);
  return p;
}

MarketConfig parse_market(const json& j) {
  reject_unknown_keys(j, {"p_min", "p_max", "noise_sigma", "demand"}, "market");
  MarketConfig m;
  read_into(j, "p_min", m.p_min);
  read_into(j, "p_max", m.p_max);
  read_into(j, "noise_sigma", m.noise_sigma);
  if (auto it = j.find("demand"); it != j.end()) {
    for (const json& dj : *it) {
      reject_unknown_keys(dj, {"intercept", "own_slope", "cross_slope"}, "market demand");
      SellerDemand d;
      read_into(dj, "intercept", d.intercept);
      read_into(dj, "own_slope", d.own_slope);
      read_into(dj, "cross_slope", d.cross_slope);
      m.demand.push_back(d);
    }
  }
  return m;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  static const std::set<std::string> known{
      "environment",    "agents",          "episodes",    "steps_per_episode",
      "exploration_episodes", "seed",      "alpha",       "gamma",
      "tau",            "actor_lr",        "critic_lr",   "noise_sigma",
      "noise_decay",    "batch_size",      "replay_capacity", "hidden",
      "k_intents",      "n_scenarios",     "epsilon",     "lambda",
      "temperature",    "mixture_weights", "output_dir",  "calibration_csv",
      "pursuit",        "market"};
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  reject_unknown_keys(j, known, "run config");

  RunConfig cfg;
  if (auto it = j.find("environment"); it != j.end()) {
    const std::string name = it->get<std::string>();
    if (name == "pursuit")
      cfg.environment = EnvKind::Pursuit;
    else if (name == "market")
      cfg.environment = EnvKind::Market;
    else
      throw ConfigError("config: unknown environment '" + name + "'");
  }
  if (auto it = j.find("agents"); it != j.end()) {
    cfg.agents.clear();
    for (const json& aj : *it) {
      const std::string name = aj.get<std::string>();
      if (name == "ddpg")
        cfg.agents.push_back(AgentKind::Ddpg);
      else if (name == "cft")
        cfg.agents.push_back(AgentKind::Cft);
      else
        throw ConfigError("config: unknown agent kind '" + name + "'");
    }
  }
  read_into(j, "episodes", cfg.episodes);
  read_into(j, "steps_per_episode", cfg.steps_per_episode);
  read_into(j, "exploration_episodes", cfg.exploration_episodes);
  read_into(j, "seed", cfg.seed);
  read_into(j, "alpha", cfg.alpha);
  read_into(j, "gamma", cfg.gamma);
  read_into(j, "tau", cfg.tau);
  read_into(j, "actor_lr", cfg.actor_lr);
  read_into(j, "critic_lr", cfg.critic_lr);
  read_into(j, "noise_sigma", cfg.noise_sigma);
  read_into(j, "noise_decay", cfg.noise_decay);
  read_into(j, "batch_size", cfg.batch_size);
  read_into(j, "replay_capacity", cfg.replay_capacity);
  read_into(j, "hidden", cfg.hidden);
  read_into(j, "k_intents", cfg.k_intents);
  read_into(j, "n_scenarios", cfg.n_scenarios);
  read_into(j, "epsilon", cfg.epsilon);
  read_into(j, "lambda", cfg.lambda);
  read_into(j, "temperature", cfg.temperature);
  if (auto it = j.find("mixture_weights"); it != j.end()) {
    const std::string name = it->get<std::string>();
    if (name == "softmin")
      cfg.mixture = MixtureMode::Softmin;
    else if (name == "direct")
      cfg.mixture = MixtureMode::Direct;
    else
      throw ConfigError("config: unknown mixture_weights '" + name + "'");
  }
  read_into(j, "output_dir", cfg.output_dir);
  read_into(j, "calibration_csv", cfg.calibration_csv);
  if (auto it = j.find("pursuit"); it != j.end()) cfg.pursuit = parse_pursuit(*it);
  if (auto it = j.find("market"); it != j.end()) cfg.market = parse_market(*it);

  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: malformed JSON in '" + path + "': " + e.what());
  }
  return parse_run_config(j);
}

json run_config_to_json(const RunConfig& cfg) {
  json agents = json::array();
  for (AgentKind k : cfg.agents) agents.push_back(agent_kind_name(k));
  json demand = json::array();
  for (const SellerDemand& d : cfg.market.demand)
    demand.push_back({{"intercept", d.intercept},
                      {"own_slope", d.own_slope},
                      {"cross_slope", d.cross_slope}});
  return json{
      {"environment", env_kind_name(cfg.environment)},
      {"agents", agents},
      {"episodes", cfg.episodes},
      {"steps_per_episode", cfg.steps_per_episode},
      {"exploration_episodes", cfg.exploration_episodes},
      {"seed", cfg.seed},
      {"alpha", cfg.alpha},
      {"gamma", cfg.gamma},
      {"tau", cfg.tau},
      {"actor_lr", cfg.actor_lr},
      {"critic_lr", cfg.critic_lr},
      {"noise_sigma", cfg.noise_sigma},
      {"noise_decay", cfg.noise_decay},
      {"batch_size", cfg.batch_size},
      {"replay_capacity", cfg.replay_capacity},
      {"hidden", cfg.hidden},
      {"k_intents", cfg.k_intents},
      {"n_scenarios", cfg.n_scenarios},
      {"epsilon", cfg.epsilon},
      {"lambda", cfg.lambda},
      {"temperature", cfg.temperature},
      {"mixture_weights", cfg.mixture == MixtureMode::Softmin ? "softmin" : "direct"},
      {"output_dir", cfg.output_dir},
      {"calibration_csv", cfg.calibration_csv},
      {"pursuit",
       {{"n_evaders", cfg.pursuit.n_evaders},
        {"n_poisons", cfg.pursuit.n_poisons},
        {"capture_radius", cfg.pursuit.capture_radius},
        {"poison_radius", cfg.pursuit.poison_radius},
        {"max_speed", cfg.pursuit.max_speed},
        {"capture_reward", cfg.pursuit.capture_reward},
        {"poison_reward", cfg.pursuit.poison_reward}}},
      {"market",
       {{"p_min", cfg.market.p_min},
        {"p_max", cfg.market.p_max},
        {"noise_sigma", cfg.market.noise_sigma},
        {"demand", demand}}}};
}

}  // namespace marl
