#include "marl/serialize.hpp"

#include <string>

#include "marl/errors.hpp"

namespace marl {

using nlohmann::json;

const json& require_field(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw IoError(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

json tensor_to_json(const ParamTensor& t) {
  return json{{"shape", t.shape}, {"values", t.values}};
}

ParamTensor tensor_from_json(const json& j) {
  ParamTensor t(require_field(j, "shape", "tensor").get<std::vector<std::size_t>>());
  auto values = require_field(j, "values", "tensor").get<std::vector<double>>();
  if (values.size() != t.size()) throw IoError("tensor: values do not match shape");
  t.values = std::move(values);
  return t;
}

json mlp_to_json(const Mlp& net) {
  json layers = json::array();
  for (const MlpLayer& layer : net.layers()) {
    layers.push_back(json{{"activation", activation_name(layer.activation)},
                          {"weight", tensor_to_json(layer.weight)},
                          {"bias", tensor_to_json(layer.bias)}});
  }
  return json{{"input_dim", net.input_dim()}, {"layers", layers}};
}

Mlp mlp_from_json(const json& j) {
  const std::size_t input_dim = require_field(j, "input_dim", "mlp").get<std::size_t>();
  Mlp net = Mlp::identity(input_dim);
  std::size_t prev = input_dim;
  for (const json& lj : require_field(j, "layers", "mlp")) {
    ParamTensor weight = tensor_from_json(require_field(lj, "weight", "mlp layer"));
    ParamTensor bias = tensor_from_json(require_field(lj, "bias", "mlp layer"));
    if (weight.shape.size() != 2 || bias.shape.size() != 1 ||
        weight.shape[0] != bias.shape[0] || weight.shape[1] != prev)
      throw IoError("mlp: layer dimensions do not chain");
    MlpLayer layer(weight.shape[1], weight.shape[0],
                   activation_from_name(require_field(lj, "activation", "mlp layer")));
    layer.weight.values = std::move(weight.values);
    layer.bias.values = std::move(bias.values);
    prev = layer.out_dim();
    net.layers().push_back(std::move(layer));
  }
  return net;
}

json adam_to_json(const AdamState& s) {
  return json{{"m", s.m},         {"v", s.v},         {"t", s.t},
              {"beta1", s.beta1}, {"beta2", s.beta2}, {"epsilon", s.epsilon}};
}

AdamState adam_from_json(const json& j) {
  AdamState s;
  s.m = require_field(j, "m", "adam").get<std::vector<double>>();
  s.v = require_field(j, "v", "adam").get<std::vector<double>>();
  if (s.m.size() != s.v.size()) throw IoError("adam: moment sizes differ");
  s.t = require_field(j, "t", "adam").get<long>();
  s.beta1 = require_field(j, "beta1", "adam").get<double>();
  s.beta2 = require_field(j, "beta2", "adam").get<double>();
  s.epsilon = require_field(j, "epsilon", "adam").get<double>();
  return s;
}

}  // namespace marl
