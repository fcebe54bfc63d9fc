#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "marl/rng.hpp"

namespace marl {

/// Contract of an N-agent competitive Markov game over a shared global state.
struct GameSpec {
  std::size_t n_agents = 0;
  std::size_t state_dim = 0;
  std::vector<std::size_t> action_dims;
  double gamma = 0.95;
  double alpha = 0.5;

  std::size_t total_action_dim() const;
  void validate() const;
};

/// Intent set and scenario index recorded by a counterfactual agent at
/// decision time, replayed by its critic update.
struct CftTrace {
  std::vector<std::vector<double>> intents;
  std::size_t scenario = 0;
};

struct JointTransition {
  std::vector<double> state;
  std::vector<std::vector<double>> actions;
  std::vector<double> rewards;  // raw r_i
  std::vector<double> next_state;
  std::vector<std::optional<CftTrace>> traces;  // one slot per agent
};

/// (1 - alpha) * r_i - alpha * sum_{j != i} r_j / (N - 1).
double shape_rewards(const std::vector<double>& rewards, double alpha, std::size_t i);

/// gamma * q_next + shaped_reward.
double td_target(double q_next, double shaped_reward, double gamma);

/// Critic input layout: state followed by every agent's action in slot order.
std::vector<double> concat_state_actions(std::span<const double> state,
                                         const std::vector<std::vector<double>>& actions);

/// Ring buffer of transitions; oldest entry evicted first at capacity.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return ring_.size(); }

  void push(JointTransition t);

  /// i = 0 addresses the oldest surviving entry.
  const JointTransition& at(std::size_t i) const;

  /// Uniform with replacement, seeded through the run's generator.
  std::vector<JointTransition> sample(std::size_t batch_size, Rng& rng) const;

  /// Global states of all stored transitions, oldest first.
  std::vector<std::vector<double>> states() const;

 private:
  std::size_t capacity_ = 0;
  std::size_t head_ = 0;  // next write slot once full
  std::vector<JointTransition> ring_;
};

struct EpisodeLog {
  std::size_t episode = 0;
  std::vector<double> raw_reward;     // per agent, summed over the episode
  std::vector<double> shaped_reward;  // per agent, summed over the episode
  double wall_ms = 0.0;
};

}  // namespace marl
