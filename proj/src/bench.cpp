#include "marl/bench.hpp"

#include <fstream>

#include "marl/csvio.hpp"
#include "marl/errors.hpp"
#include "marl/training.hpp"

namespace marl {

namespace {
double timed_run(const RunConfig& cfg) {
  RunContext ctx(cfg);
  ctx.run_all();
  double total = 0.0;
  std::size_t count = 0;
  for (const EpisodeLog& log : ctx.logs) {
    if (log.episode < cfg.exploration_episodes) continue;
    total += log.wall_ms;
    count += 1;
  }
  if (count == 0) throw ConfigError("bench: config must train past the exploration phase");
  return total / static_cast<double>(count);
}
}  // namespace

std::vector<BenchPoint> bench_sweep_k(const RunConfig& base, const std::vector<std::size_t>& ks) {
  if (ks.empty()) throw ConfigError("bench: empty K sweep");
  std::vector<BenchPoint> points;
  for (std::size_t k : ks) {
    RunConfig cfg = base;
    cfg.k_intents = k;
    cfg.validate();
    points.push_back({static_cast<double>(k), timed_run(cfg)});
  }
  return points;
}

std::vector<BenchPoint> bench_sweep_agents(const RunConfig& base,
                                           const std::vector<std::size_t>& counts) {
  if (counts.empty()) throw ConfigError("bench: empty agent sweep");
  std::vector<BenchPoint> points;
  for (std::size_t n : counts) {
    if (n < 2) throw ConfigError("bench: agent sweep points must be >= 2");
    RunConfig cfg = base;
    cfg.agents.assign(n, base.agents.at(0));
    cfg.validate();
    points.push_back({static_cast<double>(n), timed_run(cfg)});
  }
  return points;
}

void write_bench_csv(const std::string& path, const std::string& sweep_name,
                     const std::vector<BenchPoint>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("bench: cannot write '" + path + "'");
  out << sweep_name << ",mean_ms_per_episode\n";
  for (const BenchPoint& p : points)
    out << format_double(p.sweep_value) << ',' << format_double(p.mean_ms_per_episode) << "\n";
}

LineFit fit_line(const std::vector<BenchPoint>& points) {
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const BenchPoint& p : points) {
    sx += p.sweep_value;
    sy += p.mean_ms_per_episode;
    sxx += p.sweep_value * p.sweep_value;
    sxy += p.sweep_value * p.mean_ms_per_episode;
    syy += p.mean_ms_per_episode * p.mean_ms_per_episode;
  }
  LineFit fit;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (const BenchPoint& p : points) {
    const double pred = fit.slope * p.sweep_value + fit.intercept;
    ss_res += (p.mean_ms_per_episode - pred) * (p.mean_ms_per_episode - pred);
    ss_tot += (p.mean_ms_per_episode - mean_y) * (p.mean_ms_per_episode - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace marl
