#pragma once

#include <utility>

#include "marl/adam.hpp"
#include "marl/agent.hpp"
#include "marl/mlp.hpp"

namespace marl {

/// softmax(-x / temperature): a probability vector that is strictly
/// decreasing in its input, so the smallest regret gets the largest weight.
std::vector<double> softmin(std::span<const double> regrets, double temperature);

/// max(q) - q_k for every k; non-negative with at least one exact zero.
std::vector<double> posterior_regrets(std::span<const double> q_values);

/// KL(p || q) with the convention 0 * log 0 = 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// How the prior regret column weighs intents into one action:
/// Softmin inverts regrets first, Direct uses the column entries as-is.
enum class MixtureMode { Softmin, Direct };

struct CftConfig {
  std::size_t k_intents = 4;    // parallel policies K
  std::size_t n_scenarios = 16; // state clusters L
  double epsilon = 0.1;         // probability of sampling a single intent
  double lambda = 0.5;          // TD weight in the joint critic objective
  double temperature = 0.5;     // softmin temperature
  MixtureMode mixture = MixtureMode::Softmin;
  double regret_step = 0.05;    // gradient step applied to regret columns
  std::size_t refit_every = 10; // episodes between scenario refits
};

/// K policy heads sharing one state encoder. Head k is a matrix C^k taking
/// the encoding to a pre-squash action; intents are the squashed products.
struct KParallelPolicy {
  Mlp encoder;
  std::vector<ParamTensor> heads;  // each [enc_out][action_dim]
  Activation squash = Activation::Tanh;

  std::size_t k() const { return heads.size(); }
  std::size_t action_dim() const { return heads.empty() ? 0 : heads[0].shape[1]; }

  std::vector<std::vector<double>> intents(std::span<const double> state) const;
};

/// K x L prior regrets; every column lives on the probability simplex.
struct RegretMatrix {
  std::size_t n_policies = 0;   // K
  std::size_t n_scenarios = 0;  // L
  std::vector<double> m;        // row-major [K][L]

  RegretMatrix() = default;
  RegretMatrix(std::size_t k, std::size_t l);

  double& at(std::size_t k, std::size_t l) { return m[k * n_scenarios + l]; }
  double at(std::size_t k, std::size_t l) const { return m[k * n_scenarios + l]; }
  std::vector<double> column(std::size_t l) const;
  void set_column(std::size_t l, std::span<const double> col);

  /// Uniform [0, 1] entries, then each column normalized onto the simplex.
  void init_random(Rng& rng);

  /// Throws when any column has drifted off the simplex by more than tol.
  void check_columns(double tol = 1e-9) const;
};

/// Nearest-centroid state matcher; ties resolve to the lowest index.
struct ScenarioModel {
  std::vector<std::vector<double>> centroids;

  bool initialized() const { return !centroids.empty(); }
  std::size_t match(std::span<const double> state) const;
};

/// Counterfactual-thinking agent: an actor that proposes K intents per state
/// and commits a regret-weighted choice, plus a centralized critic that
/// scores every intent after the fact and feeds the regret matrix.
class CftAgent final : public Agent {
 public:
  CftAgent(std::size_t slot, const GameSpec& spec, const AgentParams& params,
           const CftConfig& cft_config, Rng& rng);

  std::string kind() const override { return "cft"; }
  std::size_t slot() const override { return slot_; }

  std::vector<std::vector<double>> generate_intents(std::span<const double> state) const;

  /// Adds the state as a centroid while fewer than L distinct states have
  /// been seen, then matches it.
  std::size_t observe_and_match(std::span<const double> state);
  std::size_t match_scenario(std::span<const double> state) const;

  ActResult act(std::span<const double> state, bool explore, Rng& rng) override;
  std::vector<double> target_action(std::span<const double> state) const override;

  /// Deterministic mixture action from the current nets (no sampling branch).
  std::vector<double> mixture_action(std::span<const double> state) const;

  void train(const std::vector<JointTransition>& batch, const GameSpec& spec,
             const TargetActions& next_actions) override;

  /// Critic values with this agent's executed action replaced by each intent.
  std::vector<double> counterfactual_q(std::span<const double> state,
                                       const std::vector<std::vector<double>>& joint_actions,
                                       const std::vector<std::vector<double>>& intents) const;

  /// Joint update: TD step on the critic plus a multiplicative gradient
  /// step on the touched regret columns. Returns pre-step (td_loss, kl_loss).
  std::pair<double, double> update_critic(const std::vector<JointTransition>& batch,
                                          const GameSpec& spec,
                                          const TargetActions& next_actions);
  std::pair<double, double> update_critic(const std::vector<JointTransition>& batch,
                                          const GameSpec& spec,
                                          const std::vector<Agent*>& all_agents);

  /// One ascent step on mean Q of the mixture action; the regret matrix is
  /// held constant. Returns the pre-step mean Q.
  double update_actor(const std::vector<JointTransition>& batch, const GameSpec& spec);

  /// Gradient computation of update_actor without the optimizer step.
  double actor_backward(const std::vector<JointTransition>& batch, const GameSpec& spec);

  void refit_scenarios(const std::vector<std::vector<double>>& states, Rng& rng);

  void end_episode(const ReplayBuffer& buffer, std::size_t episode, Rng& rng) override;

  void sync_targets(double tau);

  double noise_sigma() const override { return params.noise_sigma; }
  void set_noise_sigma(double sigma) override { params.noise_sigma = sigma; }

  nlohmann::json to_json() const override;
  static std::unique_ptr<CftAgent> from_json(const nlohmann::json& j);

  std::vector<ParamTensor*> actor_params();

  KParallelPolicy policy, policy_target;
  RegretMatrix regrets;
  ScenarioModel scenarios;
  Mlp critic, critic_target;
  AdamState actor_adam, critic_adam;
  AgentParams params;
  CftConfig cft;

 private:
  CftAgent() = default;  // deserialization shell

  std::vector<double> mixture_weights(std::size_t scenario) const;
  std::vector<double> mixture_from(const KParallelPolicy& pol, std::size_t scenario,
                                   std::span<const double> state) const;

  std::size_t slot_ = 0;
};

}  // namespace marl
