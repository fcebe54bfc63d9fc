#pragma once

#include <cmath>
#include <vector>

#include "marl/mlp.hpp"

namespace marl::test {

/// |a - b| relative to the larger magnitude; tiny pairs compare as equal.
inline bool close_rel(double a, double b, double rel_tol, double abs_floor = 1e-8) {
  const double diff = std::abs(a - b);
  if (diff <= abs_floor) return true;
  return diff / std::max(std::abs(a), std::abs(b)) < rel_tol;
}

/// Scalar loss L = sum_j c_j * out_j used by every finite-difference check.
inline double weighted_output(const Mlp& net, const std::vector<double>& input,
                              const std::vector<double>& coeffs) {
  const std::vector<double> out = net.forward(input);
  double loss = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) loss += coeffs[j] * out[j];
  return loss;
}

struct FdReport {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst = 0.0;
};

/// Central finite differences over every parameter of `net` against the
/// analytic gradients accumulated by one backward pass.
inline FdReport fd_check_params(Mlp& net, const std::vector<double>& input,
                                const std::vector<double>& coeffs, double h = 1e-5,
                                double rel_tol = 1e-4) {
  ForwardCache cache;
  net.forward(input, cache);
  net.zero_grads();
  net.backward(cache, coeffs);

  FdReport report;
  for (ParamTensor* p : net.params()) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double saved = p->values[i];
      p->values[i] = saved + h;
      const double up = weighted_output(net, input, coeffs);
      p->values[i] = saved - h;
      const double down = weighted_output(net, input, coeffs);
      p->values[i] = saved;

      const double fd = (up - down) / (2.0 * h);
      const double an = p->grads[i];
      report.checked += 1;
      const double diff = std::abs(fd - an);
      const double denom = std::max({std::abs(fd), std::abs(an), 1e-12});
      report.worst = std::max(report.worst, diff / denom);
      if (!close_rel(an, fd, rel_tol)) report.failed += 1;
    }
  }
  net.zero_grads();
  return report;
}

/// Central finite differences of the same scalar loss with respect to the
/// input, against the input gradient returned by backward.
inline FdReport fd_check_input(Mlp& net, const std::vector<double>& input,
                               const std::vector<double>& coeffs, double h = 1e-5,
                               double rel_tol = 1e-4) {
  ForwardCache cache;
  net.forward(input, cache);
  net.zero_grads();
  const std::vector<double> input_grad = net.backward(cache, coeffs);
  net.zero_grads();

  FdReport report;
  std::vector<double> probe = input;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + h;
    const double up = weighted_output(net, probe, coeffs);
    probe[i] = saved - h;
    const double down = weighted_output(net, probe, coeffs);
    probe[i] = saved;

    const double fd = (up - down) / (2.0 * h);
    report.checked += 1;
    const double diff = std::abs(fd - input_grad[i]);
    const double denom = std::max({std::abs(fd), std::abs(input_grad[i]), 1e-12});
    report.worst = std::max(report.worst, diff / denom);
    if (!close_rel(input_grad[i], fd, rel_tol)) report.failed += 1;
  }
  return report;
}

/// Single linear layer with explicit weights; W is row-major [out][in].
inline Mlp linear_net(std::size_t in, std::size_t out, const std::vector<double>& w,
                      const std::vector<double>& b,
                      Activation act = Activation::Identity) {
  Mlp net(in, {}, out, Activation::Identity, act);
  net.layers()[0].weight.values = w;
  net.layers()[0].bias.values = b;
  return net;
}

}  // namespace marl::test
