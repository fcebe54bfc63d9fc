#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "marl/cft.hpp"
#include "marl/market.hpp"
#include "marl/pursuit.hpp"

namespace marl {

enum class EnvKind { Pursuit, Market };
enum class AgentKind { Ddpg, Cft };

const char* env_kind_name(EnvKind kind);
const char* agent_kind_name(AgentKind kind);

/// Full description of one seeded experiment.
struct RunConfig {
  EnvKind environment = EnvKind::Pursuit;
  std::vector<AgentKind> agents{AgentKind::Cft, AgentKind::Ddpg};

  std::size_t episodes = 100;
  std::size_t steps_per_episode = 100;
  std::size_t exploration_episodes = 10;
  std::uint64_t seed = 1;

  double alpha = 0.5;
  double gamma = 0.95;
  double tau = 0.01;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double noise_sigma = 0.2;
  double noise_decay = 0.999;
  std::size_t batch_size = 100;
  std::size_t replay_capacity = 50000;
  std::size_t hidden = 64;

  std::size_t k_intents = 4;
  std::size_t n_scenarios = 16;
  double epsilon = 0.1;
  double lambda = 0.5;
  double temperature = 0.5;
  MixtureMode mixture = MixtureMode::Softmin;

  std::string output_dir = "out";
  std::string calibration_csv;  // optional; market only

  PursuitConfig pursuit;
  MarketConfig market;

  void validate() const;

  AgentParams agent_params() const;
  CftConfig cft_config() const;
};

/// Strict parser: unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json run_config_to_json(const RunConfig& cfg);

}  // namespace marl
