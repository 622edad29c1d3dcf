#pragma once

// JSON formats for spaces, functions, decompositions and reports.

#include <string>

#include <json.hpp>

#include "medjn/boman.hpp"
#include "medjn/covering.hpp"
#include "medjn/czd.hpp"
#include "medjn/norms.hpp"
#include "medjn/space.hpp"

namespace medjn::io {

using Json = nlohmann::ordered_json;

[[nodiscard]] Json read_json_file(const std::string& path);  // throws Parse
void write_json_file(const std::string& path, const Json& j);

// {"points":[{"id","weight","coords"?}],
//  "metric":{"kind":"euclidean"} | {"kind":"matrix","distances":[[...]]}}
[[nodiscard]] Space space_from_json(const Json& j);
[[nodiscard]] Json to_json(const Space& space);

// {"values": {id: value}} covering every point exactly once
[[nodiscard]] SampleFunction function_from_json(const Json& j, const Space& space);
[[nodiscard]] Json to_json(const Space& space, const SampleFunction& f);

// {"center": id, "radius": r}; members recomputed
[[nodiscard]] Ball ball_from_json(const Json& j, const Space& space);
[[nodiscard]] Json to_json(const Space& space, const Ball& ball);
[[nodiscard]] Json ids_json(const Space& space, const PointSet& set);
[[nodiscard]] PointSet ids_from_json(const Json& j, const Space& space);

[[nodiscard]] BomanDecomposition decomposition_from_json(const Json& j, const Space& space);
[[nodiscard]] Json to_json(const Space& space, const BomanDecomposition& dec);

[[nodiscard]] Json to_json(const Space& space, const NormResult& r);
[[nodiscard]] Json to_json(const DoublingProfile& p, const Space& space);
[[nodiscard]] Json to_json(const Space& space, const CZDecomposition& d);
[[nodiscard]] Json to_json(const LocalJNReport& r);
[[nodiscard]] Json to_json(const Space& space, const GoodLambdaResult& r);
[[nodiscard]] Json to_json(const BomanCertificate& c);
[[nodiscard]] Json to_json(const GlobalJNReport& r);
[[nodiscard]] Json to_json(const ChainRatio& r);
[[nodiscard]] Json to_json(const EquivalenceReport& r);

}  // namespace medjn::io
