#include "marl/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace marl {

std::size_t shape_product(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (std::size_t d : dims) n *= d;
  return n;
}

ParamTensor::ParamTensor(std::vector<std::size_t> dims)
    : shape(std::move(dims)),
      values(shape_product(shape), 0.0),
      grads(shape_product(shape), 0.0) {}

void ParamTensor::zero_grads() {
  std::fill(grads.begin(), grads.end(), 0.0);
}

static bool all_finite(const std::vector<double>& xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool ParamTensor::values_finite() const { return all_finite(values); }
bool ParamTensor::grads_finite() const { return all_finite(grads); }

}  // namespace marl
