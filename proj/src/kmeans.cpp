#include "marl/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace marl {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::runtime_error("kmeans: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

static std::size_t nearest(const std::vector<std::vector<double>>& centroids,
                           const std::vector<double>& p) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(centroids[c], p);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

static std::vector<std::vector<double>> seed_plus_plus(
    const std::vector<std::vector<double>>& points, std::size_t k, Rng& rng,
    const std::vector<std::vector<double>>& previous) {
  std::vector<std::vector<double>> seeds;
  seeds.reserve(k);
  seeds.push_back(points[rng.index(points.size())]);

  std::vector<double> dist2(points.size());
  while (seeds.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& s : seeds) best = std::min(best, squared_distance(s, points[i]));
      dist2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      // Fewer distinct points than requested seeds.
      const std::size_t idx = seeds.size();
      if (idx < previous.size() && previous[idx].size() == points[0].size())
        seeds.push_back(previous[idx]);
      else
        seeds.push_back(points[0]);
      continue;
    }
    double pick = rng.uniform(0.0, total);
    std::size_t chosen = points.size() - 1;
    for (std::size_t i = 0; i < points.size(); ++i) {
      pick -= dist2[i];
      if (pick <= 0.0) {
        chosen = i;
        break;
      }
    }
    seeds.push_back(points[chosen]);
  }
  return seeds;
}

KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k, Rng& rng,
                    const std::vector<std::vector<double>>& previous, std::size_t max_iters,
                    double tol) {
  if (points.empty()) throw std::runtime_error("kmeans: at least one point required");
  if (k < 1) throw std::runtime_error("kmeans: k must be >= 1");
  const std::size_t dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw std::runtime_error("kmeans: dimension mismatch");

  KMeansResult result;
  result.centroids = seed_plus_plus(points, k, rng, previous);

  std::vector<std::size_t> assign(points.size(), 0);
  double prev_inertia = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    result.iterations = iter + 1;
    double inertia = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      assign[i] = nearest(result.centroids, points[i]);
      inertia += squared_distance(result.centroids[assign[i]], points[i]);
    }

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      counts[assign[i]] += 1;
      for (std::size_t d = 0; d < dim; ++d) sums[assign[i]][d] += points[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t d = 0; d < dim; ++d)
        result.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }

    result.inertia = inertia;
    if (prev_inertia < std::numeric_limits<double>::infinity()) {
      const double denom = std::max(prev_inertia, 1e-300);
      if (std::abs(prev_inertia - inertia) / denom < tol) break;
    }
    prev_inertia = inertia;
  }
  return result;
}

}  // namespace marl
