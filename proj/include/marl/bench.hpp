#pragma once

#include <string>
#include <vector>

#include "marl/config.hpp"

namespace marl {

struct BenchPoint {
  double sweep_value = 0.0;
  double mean_ms_per_episode = 0.0;
};

/// Trains a fresh run per sweep point and reports the mean wall-clock per
/// post-exploration episode (the phase whose cost the sweep scales).
std::vector<BenchPoint> bench_sweep_k(const RunConfig& base, const std::vector<std::size_t>& ks);

/// Same, replicating the first configured agent kind across n slots.
std::vector<BenchPoint> bench_sweep_agents(const RunConfig& base,
                                           const std::vector<std::size_t>& counts);

void write_bench_csv(const std::string& path, const std::string& sweep_name,
                     const std::vector<BenchPoint>& points);

/// Least-squares line fit; returns (slope, intercept, r_squared).
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(const std::vector<BenchPoint>& points);

}  // namespace marl
