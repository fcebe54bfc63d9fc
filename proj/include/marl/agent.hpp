#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "marl/game.hpp"
#include "marl/rng.hpp"

namespace marl {

struct ActResult {
  std::vector<double> action;
  std::optional<CftTrace> trace;  // set by counterfactual agents
};

/// Knobs shared by every learning agent in a run.
struct AgentParams {
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double tau = 0.01;
  double noise_sigma = 0.2;
  std::size_t hidden = 64;
};

/// Next-state actions of every agent's target policy, one entry per batch
/// sample, shared by all critic updates in a train step.
using TargetActions = std::vector<std::vector<std::vector<double>>>;

class Agent {
 public:
  virtual ~Agent() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t slot() const = 0;

  virtual ActResult act(std::span<const double> state, bool explore, Rng& rng) = 0;

  /// Deterministic action of the target policy, used in TD targets.
  virtual std::vector<double> target_action(std::span<const double> state) const = 0;

  /// One critic step, one actor step, one target sync on a shared batch.
  virtual void train(const std::vector<JointTransition>& batch, const GameSpec& spec,
                     const TargetActions& next_actions) = 0;

  virtual double noise_sigma() const = 0;
  virtual void set_noise_sigma(double sigma) = 0;

  /// Housekeeping between episodes (e.g. scheduled scenario refits).
  virtual void end_episode(const ReplayBuffer& buffer, std::size_t episode, Rng& rng) {
    (void)buffer;
    (void)episode;
    (void)rng;
  }

  virtual nlohmann::json to_json() const = 0;
};

/// Evaluates every agent's target policy at each sample's next state.
TargetActions compute_target_actions(const std::vector<JointTransition>& batch,
                                     const std::vector<Agent*>& all_agents);

}  // namespace marl
