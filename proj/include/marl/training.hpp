#pragma once

#include <functional>
#include <memory>

#include "marl/agent.hpp"
#include "marl/config.hpp"
#include "marl/env.hpp"
#include "marl/game.hpp"

namespace marl {

std::unique_ptr<Env> make_env(const RunConfig& cfg);
std::unique_ptr<Agent> make_agent(AgentKind kind, std::size_t slot, const GameSpec& spec,
                                  const RunConfig& cfg, Rng& rng);

/// Owns every mutable piece of one seeded run: environment, agents, replay
/// buffer and the master generator. Single-threaded by construction;
/// independent contexts share nothing.
class RunContext {
 public:
  explicit RunContext(const RunConfig& config);

  RunContext(const RunContext&) = delete;
  RunContext& operator=(const RunContext&) = delete;

  /// Runs the next episode: agents act on the shared state, the environment
  /// advances, transitions are recorded, and (after the exploration phase)
  /// every step triggers one training update.
  EpisodeLog run_episode();

  /// Samples one shared batch and lets every agent update on it; skipped
  /// with a notice while the buffer is smaller than the batch.
  void train_step();

  void run_all(const std::function<void(const EpisodeLog&)>& on_episode = {});

  bool finished() const { return next_episode >= cfg.episodes; }

  RunConfig cfg;
  GameSpec spec;
  std::unique_ptr<Env> env;
  std::vector<std::unique_ptr<Agent>> agents;
  ReplayBuffer buffer;
  Rng rng;
  std::size_t next_episode = 0;
  std::vector<EpisodeLog> logs;

  /// Instrumentation point, invoked after each agent's update in train_step.
  std::function<void(RunContext&, std::size_t agent_slot)> after_agent_update;
};

}  // namespace marl
