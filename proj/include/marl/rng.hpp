#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace marl {

/// Sequential randomness source for one run. All stochastic choices in a run
/// flow through a single instance, so a saved state resumes the exact stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  double normal(double sigma) {
    if (sigma == 0.0) return 0.0;
    return std::normal_distribution<double>(0.0, sigma)(gen_);
  }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
  }

  std::uint64_t next_seed() { return gen_(); }

  std::string save_state() const;
  void load_state(const std::string& text);

 private:
  std::mt19937_64 gen_;
};

/// dim independent N(0, sigma^2) samples; sigma == 0 yields an exact zero
/// vector without consuming the generator.
std::vector<double> gaussian_noise(std::size_t dim, double sigma, Rng& rng);

}  // namespace marl
