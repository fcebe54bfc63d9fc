#pragma once

#include "marl/env.hpp"
#include "marl/rng.hpp"

namespace marl {

struct PursuitConfig {
  std::size_t n_pursuers = 2;
  std::size_t n_evaders = 50;
  std::size_t n_poisons = 50;
  double capture_radius = 0.03;
  double poison_radius = 0.03;
  double max_speed = 0.05;
  double capture_reward = 10.0;
  double poison_reward = -1.0;

  void validate() const;
};

/// Pursuit game on the unit square. Pursuers are the learning agents and
/// move by action * max_speed; evaders flee the nearest pursuer at half
/// speed; touching an evader pays +10 and respawns it, touching a poison
/// pays -1. The global state concatenates every entity position.
class PursuitWorld final : public Env {
 public:
  explicit PursuitWorld(const PursuitConfig& config);

  const char* name() const override { return "pursuit"; }
  std::size_t n_agents() const override { return config_.n_pursuers; }
  std::size_t state_dim() const override {
    return 2 * (config_.n_pursuers + config_.n_evaders + config_.n_poisons);
  }
  std::size_t action_dim(std::size_t) const override { return 2; }

  std::vector<double> reset(std::uint64_t seed) override;
  std::pair<std::vector<double>, std::vector<double>> step(
      const std::vector<std::vector<double>>& actions) override;

  struct Point {
    double x = 0.0;
    double y = 0.0;
  };

  const std::vector<Point>& pursuers() const { return pursuers_; }
  const std::vector<Point>& evaders() const { return evaders_; }
  const std::vector<Point>& poisons() const { return poisons_; }

 private:
  std::vector<double> state() const;

  PursuitConfig config_;
  std::vector<Point> pursuers_;
  std::vector<Point> velocities_;  // last pursuer displacement
  std::vector<Point> evaders_;
  std::vector<Point> poisons_;
  Rng rng_;
};

}  // namespace marl
