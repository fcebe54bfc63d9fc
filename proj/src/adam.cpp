#include "marl/adam.hpp"

#include <cmath>
#include <stdexcept>

#include "marl/errors.hpp"

namespace marl {

bool adam_step(const std::vector<ParamTensor*>& params, AdamState& state, double lr) {
  if (lr <= 0.0) throw std::runtime_error("adam_step: lr must be > 0");
  std::size_t total = 0;
  for (const ParamTensor* p : params) total += p->size();
  if (state.m.size() != total || state.v.size() != total)
    throw std::runtime_error("adam_step: state size does not match parameter count");

  bool any_nonzero = false;
  for (const ParamTensor* p : params) {
    if (!p->grads_finite()) throw NumericError("adam_step: non-finite gradient, step refused");
    for (double g : p->grads) {
      if (g != 0.0) {
        any_nonzero = true;
        break;
      }
    }
  }
  if (!any_nonzero) return false;

  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  std::size_t off = 0;
  for (ParamTensor* p : params) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double g = p->grads[i];
      double& m = state.m[off + i];
      double& v = state.v[off + i];
      m = state.beta1 * m + (1.0 - state.beta1) * g;
      v = state.beta2 * v + (1.0 - state.beta2) * g * g;
      const double mhat = m / bc1;
      const double vhat = v / bc2;
      p->values[i] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
    }
    p->zero_grads();
    off += p->size();
  }
  return true;
}

}  // namespace marl
