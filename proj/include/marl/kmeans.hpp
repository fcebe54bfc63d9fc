#pragma once

#include <cstddef>
#include <vector>

#include "marl/rng.hpp"

namespace marl {

struct KMeansResult {
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

/// Lloyd iterations with k-means++ seeding. Empty clusters keep their
/// centroid; when fewer distinct points than k exist, surplus seeds are
/// taken from `previous` (and the first point once that is exhausted).
KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k, Rng& rng,
                    const std::vector<std::vector<double>>& previous = {},
                    std::size_t max_iters = 100, double tol = 1e-6);

double squared_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace marl
