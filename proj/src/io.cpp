#include "medjn/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "medjn/error.hpp"

namespace medjn::io {

namespace {

// JSON has no infinity; it is written as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <class F>
auto parse_guard(const char* what, F&& fn) {
  try {
    return fn();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
}

Json entries_json(const std::vector<LocalJNEntry>& entries) {
  Json out = Json::array();
  for (const auto& e : entries)
    out.push_back({{"lambda", e.lambda}, {"lhs", e.lhs}, {"rhs", number(e.rhs)}, {"margin", number(e.margin)},
                   {"pass", e.pass}});
  return out;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, "'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

Space space_from_json(const Json& j) {
  SpaceInput in = parse_guard("space", [&] {
    SpaceInput r;
    for (const auto& p : j.at("points")) {
      r.ids.push_back(p.at("id").get<std::string>());
      r.weights.push_back(p.at("weight").get<double>());
      if (p.contains("coords")) r.coords.push_back(p.at("coords").get<std::vector<double>>());
    }
    const auto& metric = j.at("metric");
    const auto kind = metric.at("kind").get<std::string>();
    if (kind == "matrix") {
      r.distances = metric.at("distances").get<std::vector<std::vector<double>>>();
      r.coords.clear();
    } else if (kind == "euclidean") {
      if (r.coords.size() != r.ids.size())
        throw Error(ErrorCode::Parse, "euclidean metric needs coords for every point");
    } else {
      throw Error(ErrorCode::Parse, "unknown metric kind '" + kind + "'");
    }
    return r;
  });
  return Space::build(std::move(in));
}

Json to_json(const Space& space) {
  Json points = Json::array();
  for (PointIndex i = 0; i < space.size(); ++i) {
    Json p{{"id", space.id(i)}, {"weight", space.weight(i)}};
    if (!space.coords().empty()) p["coords"] = space.coords()[i];
    points.push_back(std::move(p));
  }
  Json metric;
  if (!space.coords().empty()) {
    metric = {{"kind", "euclidean"}};
  } else {
    Json rows = Json::array();
    for (PointIndex i = 0; i < space.size(); ++i) {
      Json row = Json::array();
      for (PointIndex k = 0; k < space.size(); ++k) row.push_back(space.distance(i, k));
      rows.push_back(std::move(row));
    }
    metric = {{"kind", "matrix"}, {"distances", std::move(rows)}};
  }
  return {{"points", std::move(points)}, {"metric", std::move(metric)}};
}

SampleFunction function_from_json(const Json& j, const Space& space) {
  return parse_guard("function", [&] {
    const auto& values = j.at("values");
    if (!values.is_object()) throw Error(ErrorCode::Parse, "\"values\" must be an object");
    SampleFunction f;
    f.values.assign(space.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<bool> seen(space.size(), false);
    for (const auto& [id, v] : values.items()) {
      const PointIndex i = space.index_of(id);
      if (v.is_null()) throw Error(ErrorCode::NonFiniteValue, "value at '" + id + "' is not finite");
      f.values[i] = v.get<double>();
      seen[i] = true;
    }
    for (PointIndex i = 0; i < space.size(); ++i)
      if (!seen[i]) throw Error(ErrorCode::UnknownPoint, "function has no value at '" + space.id(i) + "'");
    validate_function(space, f);
    return f;
  });
}

Json to_json(const Space& space, const SampleFunction& f) {
  Json values = Json::object();
  for (PointIndex i = 0; i < space.size(); ++i) values[space.id(i)] = f.values[i];
  return {{"values", std::move(values)}};
}

Ball ball_from_json(const Json& j, const Space& space) {
  return parse_guard("ball", [&] {
    return ball_at(space, space.index_of(j.at("center").get<std::string>()), j.at("radius").get<double>());
  });
}

Json to_json(const Space& space, const Ball& ball) {
  return {{"center", space.id(ball.center)}, {"radius", ball.radius}};
}

Json ids_json(const Space& space, const PointSet& set) {
  Json out = Json::array();
  for (PointIndex i : set) out.push_back(space.id(i));
  return out;
}

PointSet ids_from_json(const Json& j, const Space& space) {
  return parse_guard("point list", [&] {
    std::set<PointIndex> s;
    for (const auto& id : j) s.insert(space.index_of(id.get<std::string>()));
    return PointSet(s.begin(), s.end());
  });
}

BomanDecomposition decomposition_from_json(const Json& j, const Space& space) {
  return parse_guard("decomposition", [&] {
    BomanDecomposition d;
    d.region = ids_from_json(j.at("region"), space);
    d.C1 = j.at("C1").get<double>();
    d.C2 = j.at("C2").get<double>();
    d.C3 = j.at("C3").get<double>();
    d.rho = j.at("rho").get<double>();
    d.M = j.at("M").get<std::size_t>();
    for (const auto& b : j.at("balls")) d.balls.push_back(ball_from_json(b, space));
    const Ball central = ball_from_json(j.at("central"), space);
    bool found = false;
    for (std::size_t i = 0; i < d.balls.size() && !found; ++i)
      if (d.balls[i].center == central.center && d.balls[i].members == central.members) {
        d.central = i;
        found = true;
      }
    if (!found) throw Error(ErrorCode::Parse, "central ball is not one of the balls");
    d.chains.assign(d.balls.size(), {});
    for (const auto& [key, chain] : j.at("chains").items()) {
      const std::size_t b = std::stoul(key);
      if (b >= d.balls.size()) throw Error(ErrorCode::Parse, "chain key '" + key + "' out of range");
      d.chains[b] = chain.get<std::vector<std::size_t>>();
    }
    if (j.contains("links")) {
      for (const auto& [key, ids] : j.at("links").items()) {
        const auto dash = key.find('-');
        if (dash == std::string::npos) throw Error(ErrorCode::Parse, "link key '" + key + "' is not 'a-b'");
        d.links[{std::stoul(key.substr(0, dash)), std::stoul(key.substr(dash + 1))}] = ids_from_json(ids, space);
      }
    }
    return d;
  });
}

Json to_json(const Space& space, const BomanDecomposition& dec) {
  Json balls = Json::array();
  for (const Ball& b : dec.balls) balls.push_back(to_json(space, b));
  Json chains = Json::object();
  for (std::size_t b = 0; b < dec.chains.size(); ++b) chains[std::to_string(b)] = dec.chains[b];
  Json links = Json::object();
  for (const auto& [edge, set] : dec.links)
    links[std::to_string(edge.first) + "-" + std::to_string(edge.second)] = ids_json(space, set);
  return {{"region", ids_json(space, dec.region)},
          {"C1", dec.C1},
          {"C2", dec.C2},
          {"C3", dec.C3},
          {"rho", dec.rho},
          {"M", dec.M},
          {"central", to_json(space, dec.balls.at(dec.central))},
          {"balls", std::move(balls)},
          {"chains", std::move(chains)},
          {"links", std::move(links)}};
}

Json to_json(const Space& space, const NormResult& r) {
  Json packing = Json::array();
  for (const auto& pb : r.packing.balls)
    packing.push_back({{"center", space.id(pb.ball.center)},
                       {"radius", pb.ball.radius},
                       {"oscillation", pb.oscillation},
                       {"term", number(pb.term)}});
  return {{"norm", r.norm}, {"packing", std::move(packing)}, {"mode", to_string(r.mode)}, {"exact", r.exact}};
}

Json to_json(const DoublingProfile& p, const Space& space) {
  const auto& c = p.ratio_certificate;
  return {{"c_mu", p.c_mu},
          {"dimension", p.dimension},
          {"ratio_certificate",
           {{"x", space.id(c.x)},
            {"R", c.big_radius},
            {"y", space.id(c.y)},
            {"r", c.small_radius},
            {"ratio", c.ratio},
            {"bound", c.bound},
            {"holds", c.holds},
            {"quadruples_checked", c.quadruples_checked}}}};
}

Json to_json(const Space& space, const CZDecomposition& d) {
  Json balls = Json::array();
  for (const Ball& b : d.balls) balls.push_back(to_json(space, b));
  const auto& c = d.certificate;
  return {{"lambda", d.lambda},
          {"threshold", d.threshold},
          {"level_set", ids_json(space, d.level_set)},
          {"balls", std::move(balls)},
          {"certificate",
           {{"sandwich", c.sandwich},
            {"radius_bound", c.radius_bound},
            {"exceeds_level", c.exceeds_level},
            {"stopping", c.stopping},
            {"threshold_radius", c.threshold_radius},
            {"stopping_checks", c.stopping_checks},
            {"failure", c.failure}}}};
}

Json to_json(const LocalJNReport& r) {
  return {{"lambda0", r.lambda0},
          {"entries", entries_json(r.entries)},
          {"constant_c", r.constant_c},
          {"s0", r.s0},
          {"alpha", r.alpha},
          {"c_mu", r.c_mu},
          {"center", r.center},
          {"norm", r.norm},
          {"norm_exact", r.norm_exact},
          {"trivial", {{"lhs", r.trivial_lhs}, {"rhs", r.trivial_rhs}, {"pass", r.trivial_pass}}},
          {"pass", r.pass}};
}

Json to_json(const Space& space, const GoodLambdaResult& r) {
  Json containment = Json::array();
  for (const auto& c : r.nested.containment) containment.push_back(c ? Json(*c) : Json(nullptr));
  return {{"lhs", r.lhs},
          {"rhs", r.rhs},
          {"pass", r.pass},
          {"norm", r.norm},
          {"norm_exact", r.norm_exact},
          {"low", to_json(space, r.nested.low)},
          {"high", to_json(space, r.nested.high)},
          {"containment", std::move(containment)},
          {"fallback_witnesses", r.nested.fallback_witnesses}};
}

Json to_json(const BomanCertificate& c) {
  Json conds = Json::array();
  for (const auto& k : c.conditions) conds.push_back({{"name", k.name}, {"pass", k.pass}, {"witness", k.witness}});
  return {{"pass", c.pass}, {"max_overlap", c.max_overlap}, {"conditions", std::move(conds)}};
}

Json to_json(const GlobalJNReport& r) {
  return {{"a", r.a},
          {"norm", r.norm},
          {"norm_exact", r.norm_exact},
          {"s0", r.s0},
          {"eta", r.eta},
          {"c_local", r.c_local},
          {"C0", number(r.c0)},
          {"budget", number(r.budget)},
          {"C_meas", number(r.c_meas)},
          {"entries", entries_json(r.entries)},
          {"pass", r.pass}};
}

Json to_json(const ChainRatio& r) {
  return {{"lhs", r.lhs}, {"rhs_sum", r.rhs_sum}, {"C0", number(r.c0)}};
}

Json to_json(const EquivalenceReport& r) {
  return {{"median_norm", r.median_norm},
          {"integral_norm", r.integral_norm},
          {"lower", r.lower},
          {"lower_pass", r.lower_pass},
          {"ratio", number(r.ratio)},
          {"upper_bound", r.upper_bound},
          {"within_budget", r.within_budget},
          {"s_below_s0", r.s_below_s0},
          {"status", to_string(r.status)}};
}

}  // namespace medjn::io
