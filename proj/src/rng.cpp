#include "marl/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace marl {

std::string Rng::save_state() const {
  std::ostringstream os;
  os << gen_;
  return os.str();
}

void Rng::load_state(const std::string& text) {
  std::istringstream is(text);
  is >> gen_;
  if (is.fail()) throw std::runtime_error("rng: malformed generator state");
}

std::vector<double> gaussian_noise(std::size_t dim, double sigma, Rng& rng) {
  if (dim == 0) throw std::runtime_error("gaussian_noise: dim must be >= 1");
  if (sigma < 0.0) throw std::runtime_error("gaussian_noise: sigma must be >= 0");
  std::vector<double> out(dim, 0.0);
  if (sigma == 0.0) return out;
  for (double& x : out) x = rng.normal(sigma);
  return out;
}

}  // namespace marl
