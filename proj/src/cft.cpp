#include "marl/cft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "marl/errors.hpp"
#include "marl/kmeans.hpp"
#include "marl/serialize.hpp"

namespace marl {

namespace {
constexpr double kRegretFloor = 1e-6;  // floor added to posterior regrets before normalizing

void soft_update_tensor(ParamTensor& target, const ParamTensor& source, double tau) {
  if (target.size() != source.size())
    throw std::runtime_error("soft_update: tensor size mismatch");
  for (std::size_t i = 0; i < target.size(); ++i)
    target.values[i] = tau * source.values[i] + (1.0 - tau) * target.values[i];
}
}  // namespace

std::vector<double> softmin(std::span<const double> regrets, double temperature) {
  if (regrets.empty()) throw std::runtime_error("softmin: empty input");
  if (!(temperature > 0.0)) throw std::runtime_error("softmin: temperature must be > 0");
  for (double r : regrets)
    if (!std::isfinite(r)) throw std::runtime_error("softmin: non-finite input");

  const double lo = *std::min_element(regrets.begin(), regrets.end());
  std::vector<double> out(regrets.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < regrets.size(); ++i) {
    out[i] = std::exp(-(regrets[i] - lo) / temperature);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

std::vector<double> posterior_regrets(std::span<const double> q_values) {
  if (q_values.empty()) throw std::runtime_error("posterior_regrets: empty input");
  for (double q : q_values)
    if (!std::isfinite(q)) throw std::runtime_error("posterior_regrets: non-finite input");
  const double top = *std::max_element(q_values.begin(), q_values.end());
  std::vector<double> out(q_values.size());
  for (std::size_t i = 0; i < q_values.size(); ++i) out[i] = top - q_values[i];
  return out;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::runtime_error("kl: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    s += p[i] * std::log(p[i] / std::max(q[i], 1e-300));
  }
  return std::max(0.0, s);
}

std::vector<std::vector<double>> KParallelPolicy::intents(std::span<const double> state) const {
  const std::vector<double> g = encoder.forward(state);
  std::vector<std::vector<double>> out;
  out.reserve(heads.size());
  for (const ParamTensor& head : heads) {
    const std::size_t rows = head.shape[0], cols = head.shape[1];
    if (g.size() != rows) throw std::runtime_error("k-parallel policy: head does not match encoder");
    std::vector<double> intent(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const double gr = g[r];
      const double* row = head.values.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) intent[c] += gr * row[c];
    }
    for (double& x : intent) x = apply_activation(squash, x);
    out.push_back(std::move(intent));
  }
  return out;
}

RegretMatrix::RegretMatrix(std::size_t k, std::size_t l)
    : n_policies(k), n_scenarios(l), m(k * l, 0.0) {
  if (k < 1 || l < 1) throw std::runtime_error("regret matrix: dimensions must be positive");
}

std::vector<double> RegretMatrix::column(std::size_t l) const {
  if (l >= n_scenarios) throw std::runtime_error("regret matrix: column out of range");
  std::vector<double> col(n_policies);
  for (std::size_t k = 0; k < n_policies; ++k) col[k] = at(k, l);
  return col;
}

void RegretMatrix::set_column(std::size_t l, std::span<const double> col) {
  if (l >= n_scenarios) throw std::runtime_error("regret matrix: column out of range");
  if (col.size() != n_policies) throw std::runtime_error("regret matrix: column size mismatch");
  for (std::size_t k = 0; k < n_policies; ++k) at(k, l) = col[k];
}

void RegretMatrix::init_random(Rng& rng) {
  for (double& x : m) x = rng.uniform(0.0, 1.0);
  for (std::size_t l = 0; l < n_scenarios; ++l) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n_policies; ++k) sum += at(k, l);
    if (sum < 1e-12) {
      for (std::size_t k = 0; k < n_policies; ++k)
        at(k, l) = 1.0 / static_cast<double>(n_policies);
    } else {
      for (std::size_t k = 0; k < n_policies; ++k) at(k, l) /= sum;
    }
  }
}

void RegretMatrix::check_columns(double tol) const {
  for (std::size_t l = 0; l < n_scenarios; ++l) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n_policies; ++k) {
      const double x = at(k, l);
      if (!(x >= -tol && x <= 1.0 + tol))
        throw NumericError("regret matrix: entry off the simplex");
      sum += x;
    }
    if (std::abs(sum - 1.0) > tol)
      throw NumericError("regret matrix: column sum drifted from 1");
  }
}

std::size_t ScenarioModel::match(std::span<const double> state) const {
  if (centroids.empty()) throw std::runtime_error("scenario model not initialized");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (centroids[c].size() != state.size())
      throw std::runtime_error("scenario model: state dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      const double diff = centroids[c][i] - state[i];
      d += diff * diff;
    }
    if (d < best_d) {  // strict: ties keep the lowest index
      best_d = d;
      best = c;
    }
  }
  return best;
}

CftAgent::CftAgent(std::size_t slot, const GameSpec& spec, const AgentParams& params,
                   const CftConfig& cft_config, Rng& rng)
    : params(params), cft(cft_config), slot_(slot) {
  spec.validate();
  if (slot >= spec.n_agents) throw std::runtime_error("cft: slot out of range");
  if (cft.k_intents < 1) throw std::runtime_error("cft: K must be >= 1");
  if (cft.n_scenarios < 1) throw std::runtime_error("cft: L must be >= 1");
  if (!(cft.epsilon >= 0.0 && cft.epsilon <= 1.0))
    throw std::runtime_error("cft: epsilon must be in [0, 1]");
  if (!(cft.lambda >= 0.0 && cft.lambda <= 1.0))
    throw std::runtime_error("cft: lambda must be in [0, 1]");
  if (!(cft.temperature > 0.0)) throw std::runtime_error("cft: temperature must be > 0");

  const std::size_t action_dim = spec.action_dims[slot];
  policy.encoder =
      Mlp(spec.state_dim, {params.hidden}, params.hidden, Activation::Tanh, Activation::Tanh);
  policy.encoder.init_weights(rng);
  const double bound = 1.0 / std::sqrt(static_cast<double>(params.hidden));
  policy.heads.reserve(cft.k_intents);
  for (std::size_t k = 0; k < cft.k_intents; ++k) {
    ParamTensor head({params.hidden, action_dim});
    for (double& w : head.values) w = rng.uniform(-bound, bound);
    policy.heads.push_back(std::move(head));
  }
  policy_target = policy;

  critic = Mlp(spec.state_dim + spec.total_action_dim(), {params.hidden, params.hidden}, 1,
               Activation::Relu, Activation::Identity);
  critic.init_weights(rng);
  critic_target = critic;

  regrets = RegretMatrix(cft.k_intents, cft.n_scenarios);
  regrets.init_random(rng);

  std::size_t actor_count = policy.encoder.param_count();
  for (const ParamTensor& head : policy.heads) actor_count += head.size();
  actor_adam = AdamState(actor_count);
  critic_adam = AdamState(critic.param_count());
}

std::vector<ParamTensor*> CftAgent::actor_params() {
  std::vector<ParamTensor*> ps = policy.encoder.params();
  for (ParamTensor& head : policy.heads) ps.push_back(&head);
  return ps;
}

std::vector<std::vector<double>> CftAgent::generate_intents(std::span<const double> state) const {
  return policy.intents(state);
}

std::size_t CftAgent::observe_and_match(std::span<const double> state) {
  if (scenarios.centroids.size() < cft.n_scenarios) {
    const std::vector<double> s(state.begin(), state.end());
    bool known = false;
    for (const auto& c : scenarios.centroids)
      if (c == s) {
        known = true;
        break;
      }
    if (!known) scenarios.centroids.push_back(s);
  }
  return scenarios.match(state);
}

std::size_t CftAgent::match_scenario(std::span<const double> state) const {
  return scenarios.match(state);
}

std::vector<double> CftAgent::mixture_weights(std::size_t scenario) const {
  const std::vector<double> col = regrets.column(scenario);
  if (cft.mixture == MixtureMode::Softmin) return softmin(col, cft.temperature);
  return col;  // direct: prior regret entries are already a convex weighting
}

std::vector<double> CftAgent::mixture_from(const KParallelPolicy& pol, std::size_t scenario,
                                           std::span<const double> state) const {
  const std::vector<std::vector<double>> ints = pol.intents(state);
  const std::vector<double> w = mixture_weights(scenario);
  std::vector<double> action(pol.action_dim(), 0.0);
  for (std::size_t k = 0; k < ints.size(); ++k)
    for (std::size_t d = 0; d < action.size(); ++d) action[d] += w[k] * ints[k][d];
  return action;
}

ActResult CftAgent::act(std::span<const double> state, bool explore, Rng& rng) {
  const std::size_t scenario = observe_and_match(state);
  std::vector<std::vector<double>> ints = policy.intents(state);

  std::vector<double> action;
  if (explore && cft.epsilon > 0.0 && rng.uniform(0.0, 1.0) < cft.epsilon) {
    // Sample one intent, low regrets getting the bulk of the probability.
    const std::vector<double> probs = softmin(regrets.column(scenario), cft.temperature);
    double u = rng.uniform(0.0, 1.0);
    std::size_t pick = probs.size() - 1;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      u -= probs[k];
      if (u <= 0.0) {
        pick = k;
        break;
      }
    }
    action = ints[pick];
  } else {
    const std::vector<double> w = mixture_weights(scenario);
    action.assign(policy.action_dim(), 0.0);
    for (std::size_t k = 0; k < ints.size(); ++k)
      for (std::size_t d = 0; d < action.size(); ++d) action[d] += w[k] * ints[k][d];
  }

  if (explore && params.noise_sigma > 0.0) {
    const std::vector<double> noise = gaussian_noise(action.size(), params.noise_sigma, rng);
    for (std::size_t d = 0; d < action.size(); ++d)
      action[d] = std::clamp(action[d] + noise[d], -1.0, 1.0);
  }

  CftTrace trace;
  trace.intents = std::move(ints);
  trace.scenario = scenario;
  return ActResult{std::move(action), std::move(trace)};
}

std::vector<double> CftAgent::target_action(std::span<const double> state) const {
  return mixture_from(policy_target, scenarios.match(state), state);
}

std::vector<double> CftAgent::mixture_action(std::span<const double> state) const {
  return mixture_from(policy, scenarios.match(state), state);
}

void CftAgent::train(const std::vector<JointTransition>& batch, const GameSpec& spec,
                     const TargetActions& next_actions) {
  update_critic(batch, spec, next_actions);
  update_actor(batch, spec);
  sync_targets(params.tau);
}

std::vector<double> CftAgent::counterfactual_q(
    std::span<const double> state, const std::vector<std::vector<double>>& joint_actions,
    const std::vector<std::vector<double>>& intents) const {
  if (slot_ >= joint_actions.size())
    throw std::runtime_error("counterfactual_q: joint actions do not cover this agent");
  std::vector<double> qs;
  qs.reserve(intents.size());
  std::vector<std::vector<double>> actions = joint_actions;
  for (const std::vector<double>& intent : intents) {
    if (intent.size() != joint_actions[slot_].size())
      throw std::runtime_error("counterfactual_q: intent dimension mismatch");
    actions[slot_] = intent;
    qs.push_back(critic.forward(concat_state_actions(state, actions))[0]);
  }
  return qs;
}

std::pair<double, double> CftAgent::update_critic(const std::vector<JointTransition>& batch,
                                                  const GameSpec& spec,
                                                  const std::vector<Agent*>& all_agents) {
  return update_critic(batch, spec, compute_target_actions(batch, all_agents));
}

std::pair<double, double> CftAgent::update_critic(const std::vector<JointTransition>& batch,
                                                  const GameSpec& spec,
                                                  const TargetActions& next_actions) {
  if (batch.empty()) throw std::runtime_error("cft update_critic: empty batch");
  if (next_actions.size() != batch.size())
    throw std::runtime_error("cft update_critic: target actions do not match batch");
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  const std::size_t K = cft.k_intents;

  // Per-column accumulation of posterior-regret targets, gathered with the
  // pre-update critic so regrets refer to the intents considered at act time.
  std::vector<std::vector<double>> col_grad_sum(regrets.n_scenarios);
  std::vector<std::size_t> col_count(regrets.n_scenarios, 0);
  double td_loss = 0.0, kl_loss = 0.0;

  for (std::size_t b = 0; b < batch.size(); ++b) {
    const JointTransition& tr = batch[b];
    if (slot_ >= tr.traces.size() || !tr.traces[slot_])
      throw std::runtime_error("cft update_critic: transition lacks this agent's trace");
    const CftTrace& trace = *tr.traces[slot_];
    if (trace.intents.size() != K)
      throw std::runtime_error("cft update_critic: stored intent count mismatch");

    // TD side.
    const double q_next =
        critic_target.forward(concat_state_actions(tr.next_state, next_actions[b]))[0];
    const double y = td_target(q_next, shape_rewards(tr.rewards, spec.alpha, slot_), spec.gamma);

    ForwardCache cache;
    const double q = critic.forward(concat_state_actions(tr.state, tr.actions), cache)[0];
    const double err = q - y;
    td_loss += err * err * inv_n;
    if (cft.lambda > 0.0)
      critic.backward(cache, std::vector<double>{cft.lambda * 2.0 * err * inv_n});

    // Regret side: score every stored intent, then aim the prior column at
    // the normalized posterior regrets.
    if (cft.lambda < 1.0) {
      const std::size_t l = trace.scenario;
      if (l >= regrets.n_scenarios)
        throw std::runtime_error("cft update_critic: stored scenario out of range");
      const std::vector<double> qk = counterfactual_q(tr.state, tr.actions, trace.intents);
      std::vector<double> target = posterior_regrets(qk);
      double sum = 0.0;
      for (double& x : target) {
        x += kRegretFloor;
        sum += x;
      }
      for (double& x : target) x /= sum;

      const std::vector<double> col = regrets.column(l);
      kl_loss += kl_divergence(col, target) * inv_n;

      if (col_grad_sum[l].empty()) col_grad_sum[l].assign(K, 0.0);
      for (std::size_t k = 0; k < K; ++k) {
        const double mk = std::max(col[k], 1e-12);
        col_grad_sum[l][k] += std::log(mk / target[k]) + 1.0;
      }
      col_count[l] += 1;
    }
  }

  if (!std::isfinite(td_loss) || !std::isfinite(kl_loss))
    throw NumericError("cft update_critic: non-finite loss, run aborted");

  if (cft.lambda > 0.0 && params.critic_lr > 0.0)
    adam_step(critic.params(), critic_adam, params.critic_lr);
  else
    critic.zero_grads();

  // Exponentiated-gradient step on every touched column. Posterior targets
  // carry near-zero entries, where a fixed Euclidean step on the log
  // gradient overshoots the simplex and oscillates; the multiplicative
  // update follows the KL geometry instead and stays strictly positive.
  for (std::size_t l = 0; l < regrets.n_scenarios; ++l) {
    if (col_count[l] == 0) continue;
    std::vector<double> col = regrets.column(l);
    const double scale =
        cft.regret_step * (1.0 - cft.lambda) / static_cast<double>(col_count[l]);
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      col[k] = std::max(col[k], 1e-12) * std::exp(-scale * col_grad_sum[l][k]);
      sum += col[k];
    }
    double floored = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      col[k] = std::max(col[k] / sum, 1e-12);
      floored += col[k];
    }
    for (std::size_t k = 0; k < K; ++k) col[k] /= floored;
    regrets.set_column(l, col);
  }
  regrets.check_columns();

  return {td_loss, kl_loss};
}

double CftAgent::actor_backward(const std::vector<JointTransition>& batch,
                                const GameSpec& spec) {
  if (batch.empty()) throw std::runtime_error("cft update_actor: empty batch");
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  const std::size_t action_dim = policy.action_dim();
  const std::size_t enc_out = policy.encoder.output_dim();
  const std::size_t offset = [&] {
    std::size_t off = spec.state_dim;
    for (std::size_t j = 0; j < slot_; ++j) off += spec.action_dims[j];
    return off;
  }();

  double objective = 0.0;
  for (const JointTransition& tr : batch) {
    const std::size_t scenario = scenarios.match(tr.state);
    const std::vector<double> w = mixture_weights(scenario);

    ForwardCache enc_cache;
    const std::vector<double> g = policy.encoder.forward(tr.state, enc_cache);

    // Squashed head outputs and the committed mixture.
    std::vector<std::vector<double>> head_out(policy.k());
    std::vector<double> mix(action_dim, 0.0);
    for (std::size_t k = 0; k < policy.k(); ++k) {
      std::vector<double>& yk = head_out[k];
      yk.assign(action_dim, 0.0);
      const double* hv = policy.heads[k].values.data();
      for (std::size_t r = 0; r < enc_out; ++r) {
        const double gr = g[r];
        const double* row = hv + r * action_dim;
        for (std::size_t d = 0; d < action_dim; ++d) yk[d] += gr * row[d];
      }
      for (std::size_t d = 0; d < action_dim; ++d) {
        yk[d] = apply_activation(policy.squash, yk[d]);
        mix[d] += w[k] * yk[d];
      }
    }

    std::vector<std::vector<double>> actions = tr.actions;
    actions[slot_] = mix;
    ForwardCache critic_cache;
    objective += critic.forward(concat_state_actions(tr.state, actions), critic_cache)[0] * inv_n;

    // Everything below accumulates the gradient of -mean Q (ascent).
    const std::vector<double> input_grad =
        critic.backward(critic_cache, std::vector<double>{inv_n});
    std::vector<double> enc_grad(enc_out, 0.0);
    for (std::size_t k = 0; k < policy.k(); ++k) {
      const double* hv = policy.heads[k].values.data();
      double* hg = policy.heads[k].grads.data();
      std::vector<double> dz(action_dim);
      for (std::size_t d = 0; d < action_dim; ++d) {
        const double dy = -w[k] * input_grad[offset + d];
        dz[d] = dy * activation_grad_from_output(policy.squash, head_out[k][d]);
      }
      for (std::size_t r = 0; r < enc_out; ++r) {
        const double gr = g[r];
        const double* row = hv + r * action_dim;
        double* grow = hg + r * action_dim;
        double acc = 0.0;
        for (std::size_t d = 0; d < action_dim; ++d) {
          grow[d] += gr * dz[d];
          acc += row[d] * dz[d];
        }
        enc_grad[r] += acc;
      }
    }
    policy.encoder.backward(enc_cache, enc_grad);
  }
  critic.zero_grads();
  if (!std::isfinite(objective))
    throw NumericError("cft update_actor: non-finite objective, run aborted");
  return objective;
}

double CftAgent::update_actor(const std::vector<JointTransition>& batch, const GameSpec& spec) {
  const double objective = actor_backward(batch, spec);
  if (params.actor_lr > 0.0) {
    adam_step(actor_params(), actor_adam, params.actor_lr);
  } else {
    policy.encoder.zero_grads();
    for (ParamTensor& head : policy.heads) head.zero_grads();
  }
  return objective;
}

void CftAgent::refit_scenarios(const std::vector<std::vector<double>>& states, Rng& rng) {
  if (states.empty()) throw std::runtime_error("refit_scenarios: no states");
  const KMeansResult result =
      kmeans(states, cft.n_scenarios, rng, scenarios.centroids, 100, 1e-6);
  scenarios.centroids = result.centroids;
}

void CftAgent::end_episode(const ReplayBuffer& buffer, std::size_t episode, Rng& rng) {
  if (cft.refit_every == 0) return;
  if ((episode + 1) % cft.refit_every != 0) return;
  if (buffer.size() == 0) return;
  refit_scenarios(buffer.states(), rng);
}

void CftAgent::sync_targets(double tau) {
  soft_update(policy_target.encoder, policy.encoder, tau);
  if (policy_target.heads.size() != policy.heads.size())
    throw std::runtime_error("soft_update: head count mismatch");
  for (std::size_t k = 0; k < policy.heads.size(); ++k)
    soft_update_tensor(policy_target.heads[k], policy.heads[k], tau);
  soft_update(critic_target, critic, tau);
}

nlohmann::json CftAgent::to_json() const {
  nlohmann::json heads = nlohmann::json::array();
  nlohmann::json target_heads = nlohmann::json::array();
  for (const ParamTensor& h : policy.heads) heads.push_back(tensor_to_json(h));
  for (const ParamTensor& h : policy_target.heads) target_heads.push_back(tensor_to_json(h));
  return nlohmann::json{
      {"kind", kind()},
      {"slot", slot_},
      {"encoder", mlp_to_json(policy.encoder)},
      {"encoder_target", mlp_to_json(policy_target.encoder)},
      {"heads", heads},
      {"heads_target", target_heads},
      {"critic", mlp_to_json(critic)},
      {"critic_target", mlp_to_json(critic_target)},
      {"actor_adam", adam_to_json(actor_adam)},
      {"critic_adam", adam_to_json(critic_adam)},
      {"regrets",
       {{"k", regrets.n_policies}, {"l", regrets.n_scenarios}, {"m", regrets.m}}},
      {"centroids", scenarios.centroids},
      {"params",
       {{"actor_lr", params.actor_lr},
        {"critic_lr", params.critic_lr},
        {"tau", params.tau},
        {"noise_sigma", params.noise_sigma},
        {"hidden", params.hidden}}},
      {"cft",
       {{"k_intents", cft.k_intents},
        {"n_scenarios", cft.n_scenarios},
        {"epsilon", cft.epsilon},
        {"lambda", cft.lambda},
        {"temperature", cft.temperature},
        {"mixture", cft.mixture == MixtureMode::Softmin ? "softmin" : "direct"},
        {"regret_step", cft.regret_step},
        {"refit_every", cft.refit_every}}}};
}

std::unique_ptr<CftAgent> CftAgent::from_json(const nlohmann::json& j) {
  const nlohmann::json& pj = require_field(j, "params", "cft agent");
  AgentParams params;
  params.actor_lr = require_field(pj, "actor_lr", "agent params").get<double>();
  params.critic_lr = require_field(pj, "critic_lr", "agent params").get<double>();
  params.tau = require_field(pj, "tau", "agent params").get<double>();
  params.noise_sigma = require_field(pj, "noise_sigma", "agent params").get<double>();
  params.hidden = require_field(pj, "hidden", "agent params").get<std::size_t>();

  const nlohmann::json& cj = require_field(j, "cft", "cft agent");
  CftConfig cfg;
  cfg.k_intents = require_field(cj, "k_intents", "cft config").get<std::size_t>();
  cfg.n_scenarios = require_field(cj, "n_scenarios", "cft config").get<std::size_t>();
  cfg.epsilon = require_field(cj, "epsilon", "cft config").get<double>();
  cfg.lambda = require_field(cj, "lambda", "cft config").get<double>();
  cfg.temperature = require_field(cj, "temperature", "cft config").get<double>();
  const std::string mixture = require_field(cj, "mixture", "cft config").get<std::string>();
  if (mixture == "softmin")
    cfg.mixture = MixtureMode::Softmin;
  else if (mixture == "direct")
    cfg.mixture = MixtureMode::Direct;
  else
    throw IoError("cft config: unknown mixture mode '" + mixture + "'");
  cfg.regret_step = require_field(cj, "regret_step", "cft config").get<double>();
  cfg.refit_every = require_field(cj, "refit_every", "cft config").get<std::size_t>();

  // Rebuild through the value members; the constructor only shapes storage.
  auto agent = std::unique_ptr<CftAgent>(new CftAgent());
  agent->params = params;
  agent->cft = cfg;
  agent->slot_ = require_field(j, "slot", "cft agent").get<std::size_t>();
  agent->policy.encoder = mlp_from_json(require_field(j, "encoder", "cft agent"));
  agent->policy_target.encoder = mlp_from_json(require_field(j, "encoder_target", "cft agent"));
  for (const nlohmann::json& hj : require_field(j, "heads", "cft agent"))
    agent->policy.heads.push_back(tensor_from_json(hj));
  for (const nlohmann::json& hj : require_field(j, "heads_target", "cft agent"))
    agent->policy_target.heads.push_back(tensor_from_json(hj));
  agent->critic = mlp_from_json(require_field(j, "critic", "cft agent"));
  agent->critic_target = mlp_from_json(require_field(j, "critic_target", "cft agent"));
  agent->actor_adam = adam_from_json(require_field(j, "actor_adam", "cft agent"));
  agent->critic_adam = adam_from_json(require_field(j, "critic_adam", "cft agent"));

  const nlohmann::json& rj = require_field(j, "regrets", "cft agent");
  agent->regrets = RegretMatrix(require_field(rj, "k", "regret matrix").get<std::size_t>(),
                                require_field(rj, "l", "regret matrix").get<std::size_t>());
  auto m = require_field(rj, "m", "regret matrix").get<std::vector<double>>();
  if (m.size() != agent->regrets.m.size()) throw IoError("regret matrix: size mismatch");
  agent->regrets.m = std::move(m);
  agent->scenarios.centroids =
      require_field(j, "centroids", "cft agent").get<std::vector<std::vector<double>>>();
  return agent;
}

}  // namespace marl
