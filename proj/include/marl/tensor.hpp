#pragma once

#include <cstddef>
#include <vector>

namespace marl {

/// Flat parameter block with gradient storage of the same length.
/// Shape is bookkeeping only; values are stored row-major.
struct ParamTensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;
  std::vector<double> grads;

  ParamTensor() = default;
  explicit ParamTensor(std::vector<std::size_t> dims);

  std::size_t size() const { return values.size(); }
  void zero_grads();
  bool values_finite() const;
  bool grads_finite() const;
};

std::size_t shape_product(const std::vector<std::size_t>& dims);

}  // namespace marl
