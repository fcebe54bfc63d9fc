#pragma once

#include "json.hpp"
#include "marl/adam.hpp"
#include "marl/mlp.hpp"
#include "marl/tensor.hpp"

namespace marl {

nlohmann::json tensor_to_json(const ParamTensor& t);
ParamTensor tensor_from_json(const nlohmann::json& j);

nlohmann::json mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

nlohmann::json adam_to_json(const AdamState& s);
AdamState adam_from_json(const nlohmann::json& j);

/// Fetch a required field, with the owning object named in the error.
const nlohmann::json& require_field(const nlohmann::json& j, const char* key, const char* where);

}  // namespace marl
