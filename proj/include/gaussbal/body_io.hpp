#pragma once

#include "gaussbal/balancing.hpp"
#include "gaussbal/bodies.hpp"

#include <json.hpp>

#include <string>

namespace gaussbal {

/// Body JSON:
///   {"type":"hpolytope","dim":n,"normals":[[...],...],"offsets":[...]}
///   {"type":"halfspace","dim":n,"normal":[...],"offset":d}
///   {"type":"planar_hypograph","theta":{"kind":"piecewise_linear",
///       "knots":[[z,x],...],"left_slope":s,"right_value":v}}
/// Normals are normalized on load (offsets rescale accordingly);
/// right_value accepts the string "-inf".
BodyPtr body_from_json(const nlohmann::json& j);

nlohmann::json body_to_json(const Body& body); // polytopes and halfspaces

BodyPtr load_body_file(const std::string& path);

Gauge gauge_from_string(const std::string& s);
std::string gauge_to_string(Gauge g);

/// {"dim":n,"vectors":[[...],...],"body":<body JSON>,"gauge":"linf"|"l2"|"l1"}
BalancingInstance instance_from_json(const nlohmann::json& j);
BalancingInstance load_instance_file(const std::string& path);

nlohmann::json sign_result_to_json(const SignResult& r);
nlohmann::json chain_result_to_json(const ChainResult& r);

} // namespace gaussbal
