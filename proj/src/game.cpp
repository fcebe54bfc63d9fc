#include "marl/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace marl {

std::size_t GameSpec::total_action_dim() const {
  std::size_t n = 0;
  for (std::size_t d : action_dims) n += d;
  return n;
}

void GameSpec::validate() const {
  if (n_agents < 1) throw std::runtime_error("game: n_agents must be >= 1");
  if (state_dim < 1) throw std::runtime_error("game: state_dim must be >= 1");
  if (action_dims.size() != n_agents)
    throw std::runtime_error("game: one action dim required per agent");
  for (std::size_t d : action_dims)
    if (d < 1) throw std::runtime_error("game: action dims must be >= 1");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::runtime_error("game: gamma must be in (0, 1)");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::runtime_error("game: alpha must be in [0, 1)");
  if (alpha > 0.0 && n_agents < 2)
    throw std::runtime_error("game: alpha > 0 requires at least 2 agents");
}

double shape_rewards(const std::vector<double>& rewards, double alpha, std::size_t i) {
  if (i >= rewards.size()) throw std::runtime_error("shape_rewards: agent index out of range");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::runtime_error("shape_rewards: alpha must be in [0, 1)");
  if (alpha > 0.0 && rewards.size() < 2)
    throw std::runtime_error("shape_rewards: alpha > 0 requires at least 2 agents");
  for (double r : rewards)
    if (!std::isfinite(r)) throw std::runtime_error("shape_rewards: non-finite reward");

  if (alpha == 0.0) return rewards[i];
  double others = 0.0;
  for (std::size_t j = 0; j < rewards.size(); ++j)
    if (j != i) others += rewards[j];
  const double n_others = static_cast<double>(rewards.size() - 1);
  return (1.0 - alpha) * rewards[i] + alpha * (-others / n_others);
}

double td_target(double q_next, double shaped_reward, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::runtime_error("td_target: gamma must be in (0, 1)");
  if (!std::isfinite(q_next) || !std::isfinite(shaped_reward))
    throw std::runtime_error("td_target: non-finite input");
  return gamma * q_next + shaped_reward;
}

std::vector<double> concat_state_actions(std::span<const double> state,
                                         const std::vector<std::vector<double>>& actions) {
  std::vector<double> out;
  std::size_t n = state.size();
  for (const auto& a : actions) n += a.size();
  out.reserve(n);
  out.insert(out.end(), state.begin(), state.end());
  for (const auto& a : actions) out.insert(out.end(), a.begin(), a.end());
  return out;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::runtime_error("replay buffer: capacity must be >= 1");
  ring_.reserve(capacity);
}

void ReplayBuffer::push(JointTransition t) {
  if (ring_.size() < capacity_) {
    ring_.push_back(std::move(t));
  } else {
    ring_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
  }
}

const JointTransition& ReplayBuffer::at(std::size_t i) const {
  if (i >= ring_.size()) throw std::runtime_error("replay buffer: index out of range");
  return ring_[(head_ + i) % ring_.size()];
}

std::vector<JointTransition> ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  if (batch_size < 1) throw std::runtime_error("replay buffer: batch size must be >= 1");
  if (ring_.empty()) throw std::runtime_error("replay buffer: cannot sample from an empty buffer");
  std::vector<JointTransition> batch;
  batch.reserve(batch_size);
  // Logical (oldest-first) indexing keeps draws stable across a
  // serialize/restore cycle that rebuilds the ring.
  for (std::size_t b = 0; b < batch_size; ++b) batch.push_back(at(rng.index(ring_.size())));
  return batch;
}

std::vector<std::vector<double>> ReplayBuffer::states() const {
  std::vector<std::vector<double>> out;
  out.reserve(ring_.size());
  for (std::size_t i = 0; i < ring_.size(); ++i) out.push_back(at(i).state);
  return out;
}

}  // namespace marl
