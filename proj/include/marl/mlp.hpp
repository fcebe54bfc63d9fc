#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "marl/rng.hpp"
#include "marl/tensor.hpp"

namespace marl {

enum class Activation { Identity, Relu, Tanh };

Activation activation_from_name(const std::string& name);
const char* activation_name(Activation act);

double apply_activation(Activation act, double x);
/// Derivative expressed through the activation output y (valid for all three).
double activation_grad_from_output(Activation act, double y);

struct MlpLayer {
  ParamTensor weight;  // [out][in], row-major
  ParamTensor bias;    // [out]
  Activation activation = Activation::Identity;

  MlpLayer() = default;
  MlpLayer(std::size_t in, std::size_t out, Activation act);

  std::size_t in_dim() const { return weight.shape[1]; }
  std::size_t out_dim() const { return weight.shape[0]; }
};

/// Per-layer activations recorded by forward. acts[0] is the input,
/// acts[k + 1] the output of layer k; enough to backpropagate exactly.
struct ForwardCache {
  std::vector<std::vector<double>> acts;
};

/// Feed-forward net over 64-bit reals. A net with no layers is the identity.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden,
      std::size_t output_dim, Activation hidden_act, Activation output_act);

  static Mlp identity(std::size_t dim);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const {
    return layers_.empty() ? input_dim_ : layers_.back().out_dim();
  }

  std::vector<MlpLayer>& layers() { return layers_; }
  const std::vector<MlpLayer>& layers() const { return layers_; }

  /// Uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)] for weights and biases.
  void init_weights(Rng& rng);

  std::vector<ParamTensor*> params();
  void zero_grads();
  std::size_t param_count() const;

  std::vector<double> forward(std::span<const double> input, ForwardCache& cache) const;
  std::vector<double> forward(std::span<const double> input) const;

  /// Accumulates parameter gradients and returns the gradient with respect
  /// to the input, for chaining an actor through a critic.
  std::vector<double> backward(const ForwardCache& cache, std::span<const double> output_grad);

 private:
  std::size_t input_dim_ = 0;
  std::vector<MlpLayer> layers_;
};

/// target := tau * source + (1 - tau) * target, for every parameter.
void soft_update(Mlp& target, const Mlp& source, double tau);

}  // namespace marl
