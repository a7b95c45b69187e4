#pragma once

#include <string>

#include <json.hpp>

#include "dynet/params.hpp"
#include "dynet/social_index.hpp"

namespace dynet {

using json = nlohmann::ordered_json;

/// Config object schema: {"lambda","mu","alpha","beta","version","social_index":{"kind",...}}.
json to_json(const ModelParams& p);
json to_json(const SocialIndexDistribution& d);
json config_to_json(const ModelParams& p, const SocialIndexDistribution& d);

ModelParams params_from_json(const json& j);
SocialIndexDistribution dist_from_json(const json& j);

/// CLI shorthand "kind:args", e.g. "const:1", "two_point:1,2,0.5",
/// "exp:1", "pareto:2.5,1", "lognormal:0,0.25".
SocialIndexDistribution dist_from_string(const std::string& spec);

}  // namespace dynet
