#pragma once

#include <string>

#include "marl/env.hpp"
#include "marl/rng.hpp"

namespace marl {

/// Linear demand of one seller: volume = intercept - own_slope * own price
/// + cross_slope * mean competitor price, clamped at zero.
struct SellerDemand {
  double intercept = 10.0;
  double own_slope = 1.0;
  double cross_slope = 0.5;
};

struct MarketConfig {
  std::size_t n_sellers = 2;
  std::vector<SellerDemand> demand;  // resized with defaults when shorter
  double p_min = 1.0;
  double p_max = 10.0;
  double noise_sigma = 0.1;

  void validate() const;
};

/// Multi-seller market. Actions are prices (affinely mapped from [-1, 1] to
/// [p_min, p_max]), rewards are revenues, and the global state holds every
/// seller's instant sales volume.
class MarketWorld final : public Env {
 public:
  explicit MarketWorld(const MarketConfig& config);

  const char* name() const override { return "market"; }
  std::size_t n_agents() const override { return config_.n_sellers; }
  std::size_t state_dim() const override { return config_.n_sellers; }
  std::size_t action_dim(std::size_t) const override { return 1; }

  double to_price(double action) const;

  std::vector<double> reset(std::uint64_t seed) override;
  std::pair<std::vector<double>, std::vector<double>> step(
      const std::vector<std::vector<double>>& actions) override;

  const MarketConfig& config() const { return config_; }

 private:
  std::vector<double> volumes(const std::vector<double>& prices, bool with_noise);

  MarketConfig config_;
  std::vector<double> volumes_;
  Rng rng_;
};

/// Per-seller least squares of volume on (1, own price, mean competitor
/// price), fitted from aligned price/volume rows.
struct DemandFit {
  std::vector<SellerDemand> sellers;
  double rmse = 0.0;
};

DemandFit fit_demand_model(const std::vector<std::vector<double>>& prices,
                           const std::vector<std::vector<double>>& volumes);

/// Calibration file: header `p_1,...,p_n,v_1,...,v_n`, one step per row.
DemandFit fit_demand_model_csv(const std::string& path);

}  // namespace marl
