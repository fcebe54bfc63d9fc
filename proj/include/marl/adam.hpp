#pragma once

#include <cstddef>
#include <vector>

#include "marl/tensor.hpp"

namespace marl {

/// First/second moment accumulators over the concatenation of a fixed
/// parameter list, in list order.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam step over the listed tensors; zeroes their grads.
/// An all-zero gradient leaves everything untouched, including t.
/// Returns false when the step was skipped for that reason.
bool adam_step(const std::vector<ParamTensor*>& params, AdamState& state, double lr);

}  // namespace marl
