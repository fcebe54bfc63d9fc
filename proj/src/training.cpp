#include "marl/training.hpp"

#include <chrono>
#include <iostream>

#include "marl/cft.hpp"
#include "marl/ddpg.hpp"
#include "marl/errors.hpp"

namespace marl {

std::unique_ptr<Env> make_env(const RunConfig& cfg) {
  if (cfg.environment == EnvKind::Pursuit) {
    PursuitConfig pc = cfg.pursuit;
    pc.n_pursuers = cfg.agents.size();
    return std::make_unique<PursuitWorld>(pc);
  }
  MarketConfig mc = cfg.market;
  mc.n_sellers = cfg.agents.size();
  if (!cfg.calibration_csv.empty()) {
    DemandFit fit;
    try {
      fit = fit_demand_model_csv(cfg.calibration_csv);
    } catch (const IoError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: calibration failed: ") + e.what());
    }
    if (fit.sellers.size() != cfg.agents.size())
      throw ConfigError("config: calibration file has " + std::to_string(fit.sellers.size()) +
                        " sellers but " + std::to_string(cfg.agents.size()) +
                        " agent slots are configured");
    mc.demand = fit.sellers;
  } else {
    mc.demand.resize(mc.n_sellers);
  }
  return std::make_unique<MarketWorld>(mc);
}

std::unique_ptr<Agent> make_agent(AgentKind kind, std::size_t slot, const GameSpec& spec,
                                  const RunConfig& cfg, Rng& rng) {
  if (kind == AgentKind::Ddpg)
    return std::make_unique<DdpgAgent>(slot, spec, cfg.agent_params(), rng);
  return std::make_unique<CftAgent>(slot, spec, cfg.agent_params(), cfg.cft_config(), rng);
}

RunContext::RunContext(const RunConfig& config)
    : cfg(config), buffer(config.replay_capacity), rng(config.seed) {
  cfg.validate();
  env = make_env(cfg);

  spec.n_agents = env->n_agents();
  spec.state_dim = env->state_dim();
  spec.action_dims.resize(spec.n_agents);
  for (std::size_t i = 0; i < spec.n_agents; ++i) spec.action_dims[i] = env->action_dim(i);
  spec.gamma = cfg.gamma;
  spec.alpha = cfg.alpha;
  spec.validate();

  agents.reserve(cfg.agents.size());
  for (std::size_t i = 0; i < cfg.agents.size(); ++i)
    agents.push_back(make_agent(cfg.agents[i], i, spec, cfg, rng));
}

void RunContext::train_step() {
  if (buffer.size() < cfg.batch_size) {
    std::cerr << "notice: buffer holds " << buffer.size() << " < batch " << cfg.batch_size
              << ", update skipped\n";
    return;
  }
  const std::vector<JointTransition> batch = buffer.sample(cfg.batch_size, rng);
  std::vector<Agent*> all;
  all.reserve(agents.size());
  for (auto& a : agents) all.push_back(a.get());
  // One shared evaluation of the target policies keeps every agent's update
  // symmetric in the pre-step targets.
  const TargetActions next_actions = compute_target_actions(batch, all);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    agents[i]->train(batch, spec, next_actions);
    if (after_agent_update) after_agent_update(*this, i);
  }
}

EpisodeLog RunContext::run_episode() {
  const auto start = std::chrono::steady_clock::now();
  const bool updates = next_episode >= cfg.exploration_episodes;

  std::vector<double> state = env->reset(rng.next_seed());
  EpisodeLog log;
  log.episode = next_episode;
  log.raw_reward.assign(spec.n_agents, 0.0);
  log.shaped_reward.assign(spec.n_agents, 0.0);

  for (std::size_t step = 0; step < cfg.steps_per_episode; ++step) {
    JointTransition tr;
    tr.state = state;
    tr.actions.resize(spec.n_agents);
    tr.traces.resize(spec.n_agents);
    for (std::size_t i = 0; i < spec.n_agents; ++i) {
      ActResult res = agents[i]->act(state, /*explore=*/true, rng);
      tr.actions[i] = std::move(res.action);
      tr.traces[i] = std::move(res.trace);
    }

    auto [next_state, rewards] = env->step(tr.actions);
    tr.rewards = rewards;
    tr.next_state = next_state;

    for (std::size_t i = 0; i < spec.n_agents; ++i) {
      log.raw_reward[i] += rewards[i];
      log.shaped_reward[i] += shape_rewards(rewards, spec.alpha, i);
    }
    buffer.push(std::move(tr));

    if (updates) train_step();
    state = std::move(next_state);
  }

  for (auto& agent : agents) agent->end_episode(buffer, next_episode, rng);
  for (auto& agent : agents) agent->set_noise_sigma(agent->noise_sigma() * cfg.noise_decay);

  log.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  logs.push_back(log);
  next_episode += 1;
  return log;
}

void RunContext::run_all(const std::function<void(const EpisodeLog&)>& on_episode) {
  while (!finished()) {
    const EpisodeLog log = run_episode();
    if (on_episode) on_episode(log);
  }
}

}  // namespace marl
