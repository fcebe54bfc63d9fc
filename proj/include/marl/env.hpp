#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace marl {

/// A competitive environment: shared global state, per-agent actions in
/// [-1, 1] per coordinate, per-agent raw rewards.
class Env {
 public:
  virtual ~Env() = default;

  virtual const char* name() const = 0;
  virtual std::size_t n_agents() const = 0;
  virtual std::size_t state_dim() const = 0;
  virtual std::size_t action_dim(std::size_t agent) const = 0;

  virtual std::vector<double> reset(std::uint64_t seed) = 0;

  /// Advances one step; returns (next_state, per-agent rewards).
  virtual std::pair<std::vector<double>, std::vector<double>> step(
      const std::vector<std::vector<double>>& actions) = 0;
};

}  // namespace marl
