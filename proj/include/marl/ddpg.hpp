#pragma once

#include "marl/adam.hpp"
#include "marl/agent.hpp"
#include "marl/mlp.hpp"

namespace marl {

/// Deterministic-actor agent with a per-agent centralized critic over the
/// global state and all agents' actions. The baseline opponent everywhere.
class DdpgAgent final : public Agent {
 public:
  DdpgAgent(std::size_t slot, const GameSpec& spec, const AgentParams& params, Rng& rng);

  /// Takes ownership of prebuilt nets; targets start as exact copies.
  DdpgAgent(std::size_t slot, Mlp actor_net, Mlp critic_net, const AgentParams& params);

  std::string kind() const override { return "ddpg"; }
  std::size_t slot() const override { return slot_; }

  ActResult act(std::span<const double> state, bool explore, Rng& rng) override;
  std::vector<double> target_action(std::span<const double> state) const override;

  void train(const std::vector<JointTransition>& batch, const GameSpec& spec,
             const TargetActions& next_actions) override;

  /// TD regression of the critic against target-policy bootstrap values.
  /// Returns the pre-step mean squared error.
  double update_critic(const std::vector<JointTransition>& batch, const GameSpec& spec,
                       const TargetActions& next_actions);
  double update_critic(const std::vector<JointTransition>& batch, const GameSpec& spec,
                       const std::vector<Agent*>& all_agents);

  /// One ascent step on mean Q with this agent's action re-evaluated by its
  /// actor; returns the pre-step mean Q.
  double update_actor(const std::vector<JointTransition>& batch, const GameSpec& spec);

  /// Gradient computation of update_actor without the optimizer step;
  /// leaves actor grads populated (finite-difference checks hook in here).
  double actor_backward(const std::vector<JointTransition>& batch, const GameSpec& spec);

  void sync_targets(double tau);

  double noise_sigma() const override { return params.noise_sigma; }
  void set_noise_sigma(double sigma) override { params.noise_sigma = sigma; }

  nlohmann::json to_json() const override;
  static std::unique_ptr<DdpgAgent> from_json(const nlohmann::json& j);

  Mlp actor, actor_target;
  Mlp critic, critic_target;
  AdamState actor_adam, critic_adam;
  AgentParams params;

 private:
  std::size_t slot_ = 0;
};

}  // namespace marl
