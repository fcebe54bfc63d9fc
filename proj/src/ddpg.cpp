#include "marl/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "marl/errors.hpp"
#include "marl/serialize.hpp"

namespace marl {

DdpgAgent::DdpgAgent(std::size_t slot, const GameSpec& spec, const AgentParams& params, Rng& rng)
    : params(params), slot_(slot) {
  spec.validate();
  if (slot >= spec.n_agents) throw std::runtime_error("ddpg: slot out of range");
  const std::vector<std::size_t> hidden{params.hidden, params.hidden};
  actor = Mlp(spec.state_dim, hidden, spec.action_dims[slot], Activation::Tanh, Activation::Tanh);
  critic = Mlp(spec.state_dim + spec.total_action_dim(), hidden, 1, Activation::Relu,
               Activation::Identity);
  actor.init_weights(rng);
  critic.init_weights(rng);
  actor_target = actor;
  critic_target = critic;
  actor_adam = AdamState(actor.param_count());
  critic_adam = AdamState(critic.param_count());
}

DdpgAgent::DdpgAgent(std::size_t slot, Mlp actor_net, Mlp critic_net, const AgentParams& params)
    : actor(std::move(actor_net)), critic(std::move(critic_net)), params(params), slot_(slot) {
  actor_target = actor;
  critic_target = critic;
  actor_adam = AdamState(actor.param_count());
  critic_adam = AdamState(critic.param_count());
}

ActResult DdpgAgent::act(std::span<const double> state, bool explore, Rng& rng) {
  std::vector<double> action = actor.forward(state);
  if (explore && params.noise_sigma > 0.0) {
    const std::vector<double> noise = gaussian_noise(action.size(), params.noise_sigma, rng);
    for (std::size_t i = 0; i < action.size(); ++i)
      action[i] = std::clamp(action[i] + noise[i], -1.0, 1.0);
  }
  return ActResult{std::move(action), std::nullopt};
}

std::vector<double> DdpgAgent::target_action(std::span<const double> state) const {
  return actor_target.forward(state);
}

void DdpgAgent::train(const std::vector<JointTransition>& batch, const GameSpec& spec,
                      const TargetActions& next_actions) {
  update_critic(batch, spec, next_actions);
  update_actor(batch, spec);
  sync_targets(params.tau);
}

double DdpgAgent::update_critic(const std::vector<JointTransition>& batch, const GameSpec& spec,
                                const std::vector<Agent*>& all_agents) {
  return update_critic(batch, spec, compute_target_actions(batch, all_agents));
}

double DdpgAgent::update_critic(const std::vector<JointTransition>& batch, const GameSpec& spec,
                                const TargetActions& next_actions) {
  if (batch.empty()) throw std::runtime_error("ddpg update_critic: empty batch");
  if (next_actions.size() != batch.size())
    throw std::runtime_error("ddpg update_critic: target actions do not match batch");
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  double loss = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const JointTransition& tr = batch[b];
    // Bootstrap value at the next state under every agent's target policy.
    const double q_next =
        critic_target.forward(concat_state_actions(tr.next_state, next_actions[b]))[0];
    const double y =
        td_target(q_next, shape_rewards(tr.rewards, spec.alpha, slot_), spec.gamma);

    ForwardCache cache;
    const double q = critic.forward(concat_state_actions(tr.state, tr.actions), cache)[0];
    const double err = q - y;
    loss += err * err * inv_n;
    critic.backward(cache, std::vector<double>{2.0 * err * inv_n});
  }
  if (!std::isfinite(loss))
    throw NumericError("ddpg update_critic: non-finite loss, run aborted");
  if (params.critic_lr > 0.0)
    adam_step(critic.params(), critic_adam, params.critic_lr);
  else
    critic.zero_grads();
  return loss;
}

double DdpgAgent::actor_backward(const std::vector<JointTransition>& batch,
                                 const GameSpec& spec) {
  if (batch.empty()) throw std::runtime_error("ddpg update_actor: empty batch");
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  const std::size_t offset = [&] {
    std::size_t off = spec.state_dim;
    for (std::size_t j = 0; j < slot_; ++j) off += spec.action_dims[j];
    return off;
  }();

  double objective = 0.0;
  for (const JointTransition& tr : batch) {
    ForwardCache actor_cache;
    const std::vector<double> own = actor.forward(tr.state, actor_cache);

    std::vector<std::vector<double>> actions = tr.actions;
    actions[slot_] = own;
    ForwardCache critic_cache;
    objective += critic.forward(concat_state_actions(tr.state, actions), critic_cache)[0] * inv_n;

    // Chain dQ/da_i through the actor; ascent, so the accumulated
    // gradient is of -mean Q.
    const std::vector<double> input_grad =
        critic.backward(critic_cache, std::vector<double>{inv_n});
    std::vector<double> action_grad(own.size());
    for (std::size_t d = 0; d < own.size(); ++d) action_grad[d] = -input_grad[offset + d];
    actor.backward(actor_cache, action_grad);
  }
  critic.zero_grads();  // the critic is a fixed evaluator in this step
  if (!std::isfinite(objective))
    throw NumericError("ddpg update_actor: non-finite objective, run aborted");
  return objective;
}

double DdpgAgent::update_actor(const std::vector<JointTransition>& batch, const GameSpec& spec) {
  const double objective = actor_backward(batch, spec);
  if (params.actor_lr > 0.0)
    adam_step(actor.params(), actor_adam, params.actor_lr);
  else
    actor.zero_grads();
  return objective;
}

void DdpgAgent::sync_targets(double tau) {
  soft_update(actor_target, actor, tau);
  soft_update(critic_target, critic, tau);
}

nlohmann::json DdpgAgent::to_json() const {
  return nlohmann::json{{"kind", kind()},
                        {"slot", slot_},
                        {"actor", mlp_to_json(actor)},
                        {"actor_target", mlp_to_json(actor_target)},
                        {"critic", mlp_to_json(critic)},
                        {"critic_target", mlp_to_json(critic_target)},
                        {"actor_adam", adam_to_json(actor_adam)},
                        {"critic_adam", adam_to_json(critic_adam)},
                        {"params",
                         {{"actor_lr", params.actor_lr},
                          {"critic_lr", params.critic_lr},
                          {"tau", params.tau},
                          {"noise_sigma", params.noise_sigma},
                          {"hidden", params.hidden}}}};
}

std::unique_ptr<DdpgAgent> DdpgAgent::from_json(const nlohmann::json& j) {
  const nlohmann::json& pj = require_field(j, "params", "ddpg agent");
  AgentParams params;
  params.actor_lr = require_field(pj, "actor_lr", "agent params").get<double>();
  params.critic_lr = require_field(pj, "critic_lr", "agent params").get<double>();
  params.tau = require_field(pj, "tau", "agent params").get<double>();
  params.noise_sigma = require_field(pj, "noise_sigma", "agent params").get<double>();
  params.hidden = require_field(pj, "hidden", "agent params").get<std::size_t>();

  auto agent = std::make_unique<DdpgAgent>(
      require_field(j, "slot", "ddpg agent").get<std::size_t>(),
      mlp_from_json(require_field(j, "actor", "ddpg agent")),
      mlp_from_json(require_field(j, "critic", "ddpg agent")), params);
  agent->actor_target = mlp_from_json(require_field(j, "actor_target", "ddpg agent"));
  agent->critic_target = mlp_from_json(require_field(j, "critic_target", "ddpg agent"));
  agent->actor_adam = adam_from_json(require_field(j, "actor_adam", "ddpg agent"));
  agent->critic_adam = adam_from_json(require_field(j, "critic_adam", "ddpg agent"));
  return agent;
}

}  // namespace marl
