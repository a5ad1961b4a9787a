#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "wt/copula.hpp"
#include "wt/dist.hpp"
#include "wt/pcsm.hpp"
#include "wt/wcopula.hpp"
#include "wt/wtransform.hpp"

namespace wt {

using Json = nlohmann::json;

// Descriptor schemas:
//   distribution: {"kind":"pareto1","shape":2.0} | {"kind":"uniform","a":..,
//     "b":..} | {"kind":"powerlaw","exponent":..} | {"kind":"two_sided_exp"}
//     | {"kind":"kumaraswamy_like","a":..} | {"kind":"bernoulli","p":..}
//     | {"kind":"mixed_exp"} | {"kind":"tabulated","x":[..],"p":[..]}
//   pcsm: {"change_points":[..],"pieces":[{"form":"linear","slope":..,
//     "intercept":..} | {"form":"exp_quad","increasing":..}
//     | {"form":"reciprocal"} | {"form":"abs","increasing":..}, ...]}
//   transform: {"type":"generic","base":{..},"T":{..}}
//     | {"type":"pssm","t":[..],"r":[..],"base":{..}}
//     | {"type":"vtransform","delta":..,"generator":{"kind":"linear"}|
//         {"kind":"mcneil","kappa":..,"xi":..},"flipped":bool?}
//     | {"type":"inn","theta":..}
//     | {"type":"sawtooth","teeth":..}
//     | {"type":"fixture","name":"shuffle_identity"|"zig_zag"|"tail_removal"
//         |"maltese_w"|"pareto_frac_part"}
//     | {"type":"asym_linear","theta":..}
//   copula: {"family":"clayton","theta":..,"dim":2} | ... |
//     {"family":"ordinal_sum","breaks":[..],"components":[..]} |
//     {"family":"khoudraji","base":{..},"shapes":[s1,s2]}
//   model: {"base":<copula>,"margins":[<transform>,..]} or a bare copula.

BaseDistribution dist_from_json(const Json& j);
PcsmFunction pcsm_from_json(const Json& j);
WTransform transform_from_json(const Json& j);
// Pointwise map u -> W(u); also covers generalised-transform descriptors
// ({"type":"mixed_gen","alpha":..}, {"type":"bernoulli_gen",...}).
std::function<double(double)> map_from_json(const Json& j);
Copula copula_from_json(const Json& j);
WTransformedCopula model_from_json(const Json& j);

Json read_json_file(const std::string& path);

}  // namespace wt
