#include "marl/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace marl {

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::Identity;
  if (name == "relu") return Activation::Relu;
  if (name == "tanh") return Activation::Tanh;
  throw std::runtime_error("mlp: unknown activation '" + name + "'");
}

const char* activation_name(Activation act) {
  switch (act) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
  }
  return "identity";
}

double apply_activation(Activation act, double x) {
  switch (act) {
    case Activation::Identity: return x;
    case Activation::Relu: return x > 0.0 ? x : 0.0;
    case Activation::Tanh: return std::tanh(x);
  }
  return x;
}

double activation_grad_from_output(Activation act, double y) {
  switch (act) {
    case Activation::Identity: return 1.0;
    case Activation::Relu: return y > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh: return 1.0 - y * y;
  }
  return 1.0;
}

MlpLayer::MlpLayer(std::size_t in, std::size_t out, Activation act)
    : weight({out, in}), bias({out}), activation(act) {}

Mlp::Mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden,
         std::size_t output_dim, Activation hidden_act, Activation output_act)
    : input_dim_(input_dim) {
  if (input_dim == 0 || output_dim == 0)
    throw std::runtime_error("mlp: dimensions must be positive");
  std::size_t prev = input_dim;
  for (std::size_t h : hidden) {
    if (h == 0) throw std::runtime_error("mlp: dimensions must be positive");
    layers_.emplace_back(prev, h, hidden_act);
    prev = h;
  }
  layers_.emplace_back(prev, output_dim, output_act);
}

Mlp Mlp::identity(std::size_t dim) {
  Mlp m;
  m.input_dim_ = dim;
  return m;
}

void Mlp::init_weights(Rng& rng) {
  for (MlpLayer& layer : layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in_dim()));
    for (double& w : layer.weight.values) w = rng.uniform(-bound, bound);
    for (double& b : layer.bias.values) b = rng.uniform(-bound, bound);
  }
}

std::vector<ParamTensor*> Mlp::params() {
  std::vector<ParamTensor*> ps;
  ps.reserve(layers_.size() * 2);
  for (MlpLayer& layer : layers_) {
    ps.push_back(&layer.weight);
    ps.push_back(&layer.bias);
  }
  return ps;
}

void Mlp::zero_grads() {
  for (MlpLayer& layer : layers_) {
    layer.weight.zero_grads();
    layer.bias.zero_grads();
  }
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (const MlpLayer& layer : layers_) n += layer.weight.size() + layer.bias.size();
  return n;
}

std::vector<double> Mlp::forward(std::span<const double> input, ForwardCache& cache) const {
  if (input.size() != input_dim_)
    throw std::runtime_error("mlp forward: input has dim " + std::to_string(input.size()) +
                             ", expected " + std::to_string(input_dim_));
  cache.acts.clear();
  cache.acts.reserve(layers_.size() + 1);
  cache.acts.emplace_back(input.begin(), input.end());
  for (const MlpLayer& layer : layers_) {
    const std::vector<double>& x = cache.acts.back();
    const std::size_t out = layer.out_dim(), in = layer.in_dim();
    std::vector<double> y(out);
    const double* w = layer.weight.values.data();
    for (std::size_t o = 0; o < out; ++o) {
      double z = layer.bias.values[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) z += row[i] * x[i];
      y[o] = apply_activation(layer.activation, z);
    }
    cache.acts.push_back(std::move(y));
  }
  return cache.acts.back();
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  ForwardCache cache;
  return forward(input, cache);
}

std::vector<double> Mlp::backward(const ForwardCache& cache, std::span<const double> output_grad) {
  if (cache.acts.size() != layers_.size() + 1)
    throw std::runtime_error("mlp backward: cache does not match this net");
  if (output_grad.size() != output_dim())
    throw std::runtime_error("mlp backward: output_grad has dim " +
                             std::to_string(output_grad.size()) + ", expected " +
                             std::to_string(output_dim()));
  if (cache.acts[0].size() != input_dim_)
    throw std::runtime_error("mlp backward: cache does not match this net");

  std::vector<double> grad(output_grad.begin(), output_grad.end());
  for (std::size_t li = layers_.size(); li-- > 0;) {
    MlpLayer& layer = layers_[li];
    const std::vector<double>& x = cache.acts[li];
    const std::vector<double>& y = cache.acts[li + 1];
    if (x.size() != layer.in_dim() || y.size() != layer.out_dim())
      throw std::runtime_error("mlp backward: cache does not match this net");
    const std::size_t out = layer.out_dim(), in = layer.in_dim();

    // delta = grad * act'(z), expressed through the stored output
    std::vector<double> delta(out);
    for (std::size_t o = 0; o < out; ++o)
      delta[o] = grad[o] * activation_grad_from_output(layer.activation, y[o]);

    std::vector<double> input_grad(in, 0.0);
    double* wg = layer.weight.grads.data();
    const double* w = layer.weight.values.data();
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      layer.bias.grads[o] += d;
      double* wg_row = wg + o * in;
      const double* w_row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        wg_row[i] += d * x[i];
        input_grad[i] += d * w_row[i];
      }
    }
    grad = std::move(input_grad);
  }
  return grad;
}

void soft_update(Mlp& target, const Mlp& source, double tau) {
  if (tau < 0.0 || tau > 1.0) throw std::runtime_error("soft_update: tau must be in [0, 1]");
  if (target.input_dim() != source.input_dim() ||
      target.layers().size() != source.layers().size())
    throw std::runtime_error("soft_update: architecture mismatch");
  for (std::size_t li = 0; li < target.layers().size(); ++li) {
    MlpLayer& t = target.layers()[li];
    const MlpLayer& s = source.layers()[li];
    if (t.in_dim() != s.in_dim() || t.out_dim() != s.out_dim())
      throw std::runtime_error("soft_update: architecture mismatch");
    for (std::size_t i = 0; i < t.weight.values.size(); ++i)
      t.weight.values[i] = tau * s.weight.values[i] + (1.0 - tau) * t.weight.values[i];
    for (std::size_t i = 0; i < t.bias.values.size(); ++i)
      t.bias.values[i] = tau * s.bias.values[i] + (1.0 - tau) * t.bias.values[i];
  }
}

}  // namespace marl
