#include "marl/market.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "marl/errors.hpp"

namespace marl {

void MarketConfig::validate() const {
  if (n_sellers < 1) throw std::runtime_error("market: at least one seller required");
  if (!(p_min < p_max)) throw std::runtime_error("market: p_min must be < p_max");
  if (noise_sigma < 0.0) throw std::runtime_error("market: noise_sigma must be >= 0");
  for (const SellerDemand& d : demand) {
    if (!(d.own_slope > 0.0)) throw std::runtime_error("market: own-price slope must be > 0");
    if (d.intercept < 0.0) throw std::runtime_error("market: intercept must be >= 0");
    if (d.cross_slope < 0.0) throw std::runtime_error("market: cross-price slope must be >= 0");
  }
}

MarketWorld::MarketWorld(const MarketConfig& config) : config_(config) {
  config_.demand.resize(config_.n_sellers);  // missing sellers get defaults
  config_.validate();
  volumes_.assign(config_.n_sellers, 0.0);
}

double MarketWorld::to_price(double action) const {
  const double a = std::clamp(action, -1.0, 1.0);
  return config_.p_min + (a + 1.0) * 0.5 * (config_.p_max - config_.p_min);
}

std::vector<double> MarketWorld::volumes(const std::vector<double>& prices, bool with_noise) {
  const std::size_t n = config_.n_sellers;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const SellerDemand& d = config_.demand[i];
    double cross = 0.0;
    if (n > 1) {
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) cross += prices[j];
      cross /= static_cast<double>(n - 1);
    }
    double v = d.intercept - d.own_slope * prices[i] + d.cross_slope * cross;
    if (with_noise && config_.noise_sigma > 0.0) v += rng_.normal(config_.noise_sigma);
    out[i] = std::max(0.0, v);
  }
  return out;
}

std::vector<double> MarketWorld::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  std::vector<double> prices(config_.n_sellers);
  for (double& p : prices) p = rng_.uniform(config_.p_min, config_.p_max);
  volumes_ = volumes(prices, true);
  return volumes_;
}

std::pair<std::vector<double>, std::vector<double>> MarketWorld::step(
    const std::vector<std::vector<double>>& actions) {
  if (actions.size() != config_.n_sellers)
    throw std::runtime_error("market: one action per seller required");
  std::vector<double> prices(config_.n_sellers);
  for (std::size_t i = 0; i < config_.n_sellers; ++i) {
    if (actions[i].size() != 1) throw std::runtime_error("market: actions must be 1-dimensional");
    prices[i] = to_price(actions[i][0]);
  }
  volumes_ = volumes(prices, true);
  std::vector<double> revenue(config_.n_sellers);
  for (std::size_t i = 0; i < config_.n_sellers; ++i) revenue[i] = prices[i] * volumes_[i];
  return {volumes_, std::move(revenue)};
}

// Dense Gaussian elimination with partial pivoting; throws on a singular
// system (e.g. constant prices make the design rank-deficient).
static std::vector<double> solve_normal_equations(std::vector<std::vector<double>> a,
                                                  std::vector<double> b) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (const auto& row : a)
    for (double x : row) scale = std::max(scale, std::abs(x));
  const double tol = std::max(scale, 1.0) * 1e-12;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) <= tol)
      throw std::runtime_error(
          "fit_demand_model: rank-deficient design (prices lack variation)");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

DemandFit fit_demand_model(const std::vector<std::vector<double>>& prices,
                           const std::vector<std::vector<double>>& volumes) {
  if (prices.size() != volumes.size())
    throw std::runtime_error("fit_demand_model: price/volume row counts differ");
  if (prices.size() < 3) throw std::runtime_error("fit_demand_model: at least 3 rows required");
  const std::size_t n = prices[0].size();
  if (n < 1) throw std::runtime_error("fit_demand_model: no sellers");
  for (std::size_t t = 0; t < prices.size(); ++t)
    if (prices[t].size() != n || volumes[t].size() != n)
      throw std::runtime_error("fit_demand_model: ragged rows");

  const std::size_t dim = n > 1 ? 3 : 2;  // (1, own, cross-mean) or (1, own)
  DemandFit fit;
  fit.sellers.resize(n);
  double sq_sum = 0.0;
  std::size_t sq_count = 0;

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<double>> xtx(dim, std::vector<double>(dim, 0.0));
    std::vector<double> xtv(dim, 0.0);
    auto accumulate = [&](const std::vector<double>& row, double v) {
      for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) xtx[r][c] += row[r] * row[c];
        xtv[r] += row[r] * v;
      }
    };
    auto design_row = [&](std::size_t t) {
      std::vector<double> row{1.0, prices[t][i]};
      if (n > 1) {
        double cross = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) cross += prices[t][j];
        row.push_back(cross / static_cast<double>(n - 1));
      }
      return row;
    };
    for (std::size_t t = 0; t < prices.size(); ++t) accumulate(design_row(t), volumes[t][i]);
    const std::vector<double> beta = solve_normal_equations(xtx, xtv);

    fit.sellers[i].intercept = beta[0];
    fit.sellers[i].own_slope = -beta[1];
    fit.sellers[i].cross_slope = n > 1 ? beta[2] : 0.0;

    for (std::size_t t = 0; t < prices.size(); ++t) {
      const std::vector<double> row = design_row(t);
      double pred = 0.0;
      for (std::size_t r = 0; r < dim; ++r) pred += beta[r] * row[r];
      const double res = volumes[t][i] - pred;
      sq_sum += res * res;
      sq_count += 1;
    }
  }
  fit.rmse = std::sqrt(sq_sum / static_cast<double>(sq_count));
  return fit;
}

DemandFit fit_demand_model_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("calibration: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw IoError("calibration: empty file '" + path + "'");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header.size() % 2 != 0)
    throw IoError("calibration: header must list p_1..p_n,v_1..v_n");
  const std::size_t n = header.size() / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string p = "p_" + std::to_string(i + 1);
    const std::string v = "v_" + std::to_string(i + 1);
    if (header[i] != p || header[n + i] != v)
      throw IoError("calibration: header must list p_1..p_n,v_1..v_n");
  }

  std::vector<std::vector<double>> prices, volumes;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("calibration: bad number on line " + std::to_string(line_no));
      }
    }
    if (row.size() != 2 * n)
      throw IoError("calibration: column count mismatch on line " + std::to_string(line_no));
    prices.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
    volumes.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(n), row.end());
  }
  return fit_demand_model(prices, volumes);
}

}  // namespace marl
