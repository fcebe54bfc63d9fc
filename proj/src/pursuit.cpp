#include "marl/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace marl {

void PursuitConfig::validate() const {
  if (n_pursuers < 1) throw std::runtime_error("pursuit: at least one pursuer required");
  if (capture_radius <= 0.0 || poison_radius <= 0.0)
    throw std::runtime_error("pursuit: radii must be > 0");
  if (max_speed <= 0.0) throw std::runtime_error("pursuit: max_speed must be > 0");
}

PursuitWorld::PursuitWorld(const PursuitConfig& config) : config_(config) {
  config_.validate();
  pursuers_.resize(config_.n_pursuers);
  velocities_.resize(config_.n_pursuers);
  evaders_.resize(config_.n_evaders);
  poisons_.resize(config_.n_poisons);
}

static double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

static double dist2(const PursuitWorld::Point& a, const PursuitWorld::Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::vector<double> PursuitWorld::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  for (auto* group : {&pursuers_, &evaders_, &poisons_})
    for (Point& p : *group) {
      p.x = rng_.uniform(0.0, 1.0);
      p.y = rng_.uniform(0.0, 1.0);
    }
  for (Point& v : velocities_) v = Point{};
  return state();
}

std::pair<std::vector<double>, std::vector<double>> PursuitWorld::step(
    const std::vector<std::vector<double>>& actions) {
  if (actions.size() != config_.n_pursuers)
    throw std::runtime_error("pursuit: one action per pursuer required");
  for (const auto& a : actions)
    if (a.size() != 2) throw std::runtime_error("pursuit: actions must be 2-dimensional");

  for (std::size_t i = 0; i < pursuers_.size(); ++i) {
    const double dx = std::clamp(actions[i][0], -1.0, 1.0) * config_.max_speed;
    const double dy = std::clamp(actions[i][1], -1.0, 1.0) * config_.max_speed;
    velocities_[i] = Point{dx, dy};
    pursuers_[i].x = clamp01(pursuers_[i].x + dx);
    pursuers_[i].y = clamp01(pursuers_[i].y + dy);
  }

  std::vector<double> rewards(config_.n_pursuers, 0.0);

  // An entity in range pays its nearest pursuer and respawns.
  const double cap2 = config_.capture_radius * config_.capture_radius;
  for (Point& e : evaders_) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pursuers_.size(); ++i) {
      const double d = dist2(pursuers_[i], e);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best_d <= cap2) {
      rewards[best] += config_.capture_reward;
      e.x = rng_.uniform(0.0, 1.0);
      e.y = rng_.uniform(0.0, 1.0);
    }
  }
  const double poi2 = config_.poison_radius * config_.poison_radius;
  for (Point& p : poisons_) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pursuers_.size(); ++i) {
      const double d = dist2(pursuers_[i], p);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best_d <= poi2) {
      rewards[best] += config_.poison_reward;
      p.x = rng_.uniform(0.0, 1.0);
      p.y = rng_.uniform(0.0, 1.0);
    }
  }

  // Evaders drift away from the nearest pursuer at half speed.
  const double flee = 0.5 * config_.max_speed;
  for (Point& e : evaders_) {
    double best_d = std::numeric_limits<double>::infinity();
    Point nearest{};
    for (const Point& p : pursuers_) {
      const double d = dist2(p, e);
      if (d < best_d) {
        best_d = d;
        nearest = p;
      }
    }
    const double norm = std::sqrt(best_d);
    if (norm > 0.0) {
      e.x = clamp01(e.x + flee * (e.x - nearest.x) / norm);
      e.y = clamp01(e.y + flee * (e.y - nearest.y) / norm);
    }
  }

  return {state(), std::move(rewards)};
}

std::vector<double> PursuitWorld::state() const {
  std::vector<double> s;
  s.reserve(state_dim());
  for (const auto* group : {&pursuers_, &evaders_, &poisons_})
    for (const Point& p : *group) {
      s.push_back(p.x);
      s.push_back(p.y);
    }
  return s;
}

}  // namespace marl
