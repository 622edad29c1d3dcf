// medjn: command-line front end.
//
// Exit codes: 0 every assertion passes, 1 an inequality is violated,
// 2 input or usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "medjn/acceptance.hpp"
#include "medjn/boman.hpp"
#include "medjn/covering.hpp"
#include "medjn/czd.hpp"
#include "medjn/error.hpp"
#include "medjn/generators.hpp"
#include "medjn/io.hpp"
#include "medjn/median.hpp"
#include "medjn/norms.hpp"

namespace {

using medjn::io::Json;

struct Opts {
  std::string space, function, decomposition, balls;
  std::string set = "all";
  std::string region = "all";
  std::string center;
  std::optional<double> radius;
  std::optional<double> p, q, s, t, r, eta, K, lambda, lambda_low, budget;
  std::string lambda_grid;
  std::string mode = "exact";
  bool force = false;
  std::uint64_t seed = 20240611;
  std::string output = "json";
  std::size_t threads = 1;
  std::size_t granularity = 1;
  std::string fixtures;
  std::string out_space, out_function, out_decomposition;
  // generate
  std::string kind = "grid";
  int dim = 1;
  std::size_t n = 16;
  unsigned levels = 4;
  double spacing = 1.0;
  std::string weights = "uniform";
  std::string function_kind;
  std::vector<std::string> params;
};

struct Outcome {
  Outcome(Json r, bool ok = true, std::string name = {})
      : report(std::move(r)), pass(ok), violated(std::move(name)) {}

  Json report;
  bool pass;
  std::string violated;  // inequality name when pass is false
};

[[noreturn]] void usage(const std::string& msg) { throw medjn::Error(medjn::ErrorCode::InvalidParams, msg); }

template <class T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) usage(std::string("missing ") + flag);
  return *v;
}

medjn::Space load_space(const Opts& o) {
  if (o.space.empty()) usage("missing --space");
  return medjn::io::space_from_json(medjn::io::read_json_file(o.space));
}

medjn::SampleFunction load_function(const Opts& o, const medjn::Space& space) {
  if (o.function.empty()) usage("missing --function");
  return medjn::io::function_from_json(medjn::io::read_json_file(o.function), space);
}

medjn::PointSet parse_set(const std::string& spec, const medjn::Space& space) {
  if (spec == "all") return space.all_points();
  medjn::PointSet out;
  std::stringstream ss(spec);
  for (std::string id; std::getline(ss, id, ',');)
    if (!id.empty()) out.push_back(space.index_of(id));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw medjn::Error(medjn::ErrorCode::EmptySet, "empty point set '" + spec + "'");
  return out;
}

medjn::PackingOptions packing(const Opts& o) {
  medjn::PackingOptions opts;
  if (o.mode == "exact") {
    opts.mode = medjn::PackingMode::Exact;
  } else if (o.mode == "greedy") {
    opts.mode = medjn::PackingMode::Greedy;
  } else if (o.mode == "auto") {
    opts.mode = medjn::PackingMode::Auto;
  } else {
    usage("--mode must be exact, greedy or auto");
  }
  opts.force = o.force;
  return opts;
}

medjn::Ball base_ball(const Opts& o, const medjn::Space& space) {
  if (o.center.empty()) usage("missing --center");
  return medjn::ball_at(space, space.index_of(o.center), need(o.radius, "--radius"));
}

std::optional<medjn::LambdaGrid> grid(const Opts& o) {
  if (o.lambda_grid.empty()) return std::nullopt;
  return medjn::LambdaGrid::parse(o.lambda_grid);
}

Outcome cmd_doubling(const Opts& o) {
  const auto space = load_space(o);
  const auto prof = medjn::doubling_profile(space);
  return {medjn::io::to_json(prof, space), prof.ratio_certificate.holds, "measure ratio bound"};
}

Outcome cmd_median(const Opts& o) {
  const auto space = load_space(o);
  const auto f = load_function(o, space);
  const auto set = parse_set(o.set, space);
  const double s = need(o.s, "--s");
  return {{{"median", medjn::maximal_median(space, f, set, s)}, {"s", s}, {"set", medjn::io::ids_json(space, set)}}};
}

Outcome cmd_oscillation(const Opts& o) {
  const auto space = load_space(o);
  const auto f = load_function(o, space);
  const auto set = parse_set(o.set, space);
  Json out;
  if (o.s) {
    const auto osc = medjn::median_oscillation(space, f, set, *o.s);
    out["median"] = {{"s", *o.s}, {"value", osc.value}, {"center", osc.center}};
  }
  if (o.q) {
    const auto osc = medjn::integral_oscillation(space, f, set, *o.q);
    out["integral"] = {{"q", *o.q}, {"value", osc.value}, {"center", osc.center}};
  }
  if (out.is_null()) usage("oscillation needs --s and/or --q");
  return {out};
}

Outcome cmd_bmo(const Opts& o) {
  const auto space = load_space(o);
  const auto f = load_function(o, space);
  const double s = need(o.s, "--s");
  return {{{"bmo", medjn::bmo_median_norm(space, f, parse_set(o.region, space), s)}, {"s", s}}};
}

Outcome cmd_jn_median(const Opts& o) {
  const auto space = load_space(o);
  const auto f = load_function(o, space);
  const auto region = parse_set(o.region, space);
  const auto r = medjn::jn_median_norm(space, f, region, need(o.p, "--p"), need(o.s, "--s"), packing(o));
  return {medjn::io::to_json(space, r)};
}

Outcome cmd_jn_integral(const Opts& o) {
  const auto space = load_space(o);
  const auto f = load_function(o, space);
  const auto region = parse_set(o.region, space);
  const auto r = medjn::jn_integral_norm(space, f, region, need(o.p, "--p"), need(o.q, "--q"), packing(o));
  return {medjn::io::to_json(space, r)};
}

Outcome cmd_five_cover(const Opts& o) {
  const auto space = load_space(o);
  std::vector<medjn::Ball> family;
  if (!o.balls.empty()) {
    for (const auto& b : medjn::io::read_json_file(o.balls)) family.push_back(medjn::io::ball_from_json(b, space));
  } else {
    family = medjn::canonical_balls(space, parse_set(o.region, space));
  }
  const auto cover = medjn::five_cover(space, family);
  Json selected = Json::array();
  for (std::size_t i : cover.selected) selected.push_back(medjn::io::to_json(space, family[i]));
  bool ok = true;
  for (std::size_t k = 0; k < family.size(); ++k)
    ok = ok && medjn::is_subset(family[k].members,
                                medjn::dilate(space, family[cover.selected[cover.covered_by[k]]], 5.0).members);
  return {{{"selected", selected}, {"covered_by", cover.covered_by}, {"coverage", ok}}, ok, "5-covering"};
}

medjn::CZParams cz_params(const Opts& o, const medjn::Space& space) {
  return medjn::make_cz_params(space, base_ball(o, space), o.eta.value_or(1.0), o.p.value_or(2.0), o.t.value_or(0.5),
                               o.K);
}

Outcome cmd_cz(const Opts& o) {
  const auto space = load_space(o);
  const auto f = load_function(o, space);
  const medjn::CZContext ctx(space, f, cz_params(o, space));
  const double lambda = need(o.lambda, "--lambda");
  if (o.lambda_low) {
    const auto nested = medjn::cz_nested(ctx, *o.lambda_low, lambda);
    Json containment = Json::array();
    for (const auto& c : nested.containment) containment.push_back(c ? Json(*c) : Json(nullptr));
    const bool ok = nested.low.certificate.all() && nested.high.certificate.all() && nested.total();
    return {{{"low", medjn::io::to_json(space, nested.low)},
             {"high", medjn::io::to_json(space, nested.high)},
             {"containment", containment},
             {"fallback_witnesses", nested.fallback_witnesses}},
            ok,
            "Calderon-Zygmund certificates"};
  }
  const auto d = medjn::cz_decompose(ctx, lambda);
  return {medjn::io::to_json(space, d), d.certificate.all(), "Calderon-Zygmund certificates"};
}

Outcome cmd_good_lambda(const Opts& o) {
  const auto space = load_space(o);
  const auto f = load_function(o, space);
  const auto prm = cz_params(o, space);
  const auto r = medjn::good_lambda_sides(space, f, prm, need(o.s, "--s"), need(o.lambda, "--lambda"), packing(o));
  return {medjn::io::to_json(space, r), r.pass, "good-lambda inequality"};
}

Outcome cmd_local(const Opts& o) {
  const auto space = load_space(o);
  const auto f = load_function(o, space);
  const auto prm = cz_params(o, space);
  const double s = o.s.value_or(prm.s0);
  const auto rep = medjn::local_jn_verify(space, f, prm, s, o.r.value_or(0.5), grid(o), packing(o));
  return {medjn::io::to_json(rep), rep.pass && rep.trivial_pass,
          rep.pass ? "bound below lambda0" : "local John-Nirenberg inequality"};
}

medjn::BomanDecomposition load_decomposition(const Opts& o, const medjn::Space& space) {
  if (o.decomposition.empty()) usage("missing --decomposition");
  return medjn::io::decomposition_from_json(medjn::io::read_json_file(o.decomposition), space);
}

Outcome cmd_global(const Opts& o) {
  const auto space = load_space(o);
  const auto f = load_function(o, space);
  const auto dec = load_decomposition(o, space);
  const double s = o.s.value_or(medjn::boman_s0(space, dec));
  const auto rep = medjn::global_jn_verify(space, f, dec, need(o.p, "--p"), s, o.r.value_or(0.5), grid(o), o.budget,
                                           packing(o));
  Json j = medjn::io::to_json(rep);
  j["chain"] = medjn::io::to_json(medjn::chain_ratio(space, f, dec, *o.p, s));
  return {j, rep.pass, "global John-Nirenberg budget"};
}

Outcome cmd_boman(const Opts& o) {
  const auto space = load_space(o);
  medjn::BomanDecomposition dec;
  if (o.decomposition.empty()) {
    dec = medjn::grid_boman_decomposition(space, parse_set(o.region, space), o.granularity);
    if (!o.out_decomposition.empty())
      medjn::io::write_json_file(o.out_decomposition, medjn::io::to_json(space, dec));
  } else {
    dec = load_decomposition(o, space);
  }
  const auto cert = medjn::verify_boman(space, dec);
  Json j{{"certificate", medjn::io::to_json(cert)}};
  if (o.decomposition.empty()) j["decomposition"] = medjn::io::to_json(space, dec);
  std::string failed;
  for (const auto& c : cert.conditions)
    if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
  return {j, cert.pass, "Boman condition " + failed};
}

Outcome cmd_equivalence(const Opts& o) {
  const auto space = load_space(o);
  const auto f = load_function(o, space);
  const auto rep = medjn::jn_equivalence_check(space, f, parse_set(o.region, space), need(o.p, "--p"),
                                               need(o.q, "--q"), need(o.s, "--s"), o.budget, packing(o));
  return {medjn::io::to_json(rep), rep.lower_pass, "lower bound s^{1/q} JN_{p,0,s} <= JN_{p,q}"};
}

Outcome cmd_generate(const Opts& o) {
  const auto profile = medjn::parse_weight_profile(o.weights);
  medjn::Space space = o.kind == "dyadic" ? medjn::dyadic_space(o.levels, profile, o.seed)
                       : o.kind == "grid" ? medjn::grid_space(o.dim, o.n, o.spacing, profile, o.seed)
                                          : throw medjn::Error(medjn::ErrorCode::UnknownKind,
                                                               "unknown space kind '" + o.kind + "'");
  Json out{{"space", medjn::io::to_json(space)}};
  if (!o.function_kind.empty()) {
    medjn::FunctionParams params;
    for (const auto& kv : o.params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) usage("--param expects key=value");
      try {
        params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        usage("--param value must be a number: " + kv);
      }
    }
    const auto f = medjn::canonical_function(o.function_kind, space, params, o.seed);
    out["function"] = medjn::io::to_json(space, f);
    if (!o.out_function.empty()) medjn::io::write_json_file(o.out_function, out["function"]);
  }
  if (!o.out_space.empty()) medjn::io::write_json_file(o.out_space, out["space"]);
  return {out};
}

Outcome cmd_verify_all(const Opts& o) {
  medjn::acceptance::Options opt;
  opt.seed = o.seed;
  opt.threads = std::max<std::size_t>(1, o.threads);
  opt.fixtures_dir = o.fixtures;
  const auto results = medjn::acceptance::run(opt);
  Json list = Json::array();
  bool all = true;
  std::string failed;
  for (const auto& r : results) {
    list.push_back({{"id", r.id},
                    {"name", r.name},
                    {"pass", r.pass},
                    {"instances", r.instances},
                    {"violations", r.violations},
                    {"skipped", r.skipped},
                    {"detail", r.detail}});
    if (!r.pass) failed += (failed.empty() ? "" : ", ") + std::to_string(r.id) + " " + r.name;
    all = all && r.pass;
  }
  return {{{"seed", o.seed}, {"criteria", list}, {"pass", all}}, all, "acceptance criteria " + failed};
}

void print_text(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) print_text(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) print_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

void add_common(CLI::App* sub, Opts& o) {
  sub->add_option("--space", o.space, "Space JSON");
  sub->add_option("--function", o.function, "Function JSON");
  sub->add_option("--set", o.set, "point ids (comma separated) or 'all'");
  sub->add_option("--region", o.region, "region point ids or 'all'");
  sub->add_option("--p", o.p, "exponent p");
  sub->add_option("--q", o.q, "exponent q");
  sub->add_option("--s", o.s, "median level s");
  sub->add_option("--t", o.t, "median level t");
  sub->add_option("--r", o.r, "centering level r");
  sub->add_option("--eta", o.eta, "family radius factor eta");
  sub->add_option("--K", o.K, "good-lambda factor K");
  sub->add_option("--lambda", o.lambda, "level lambda");
  sub->add_option("--lambda-low", o.lambda_low, "lower level for nested decompositions");
  sub->add_option("--lambda-grid", o.lambda_grid, "log:lo:hi:count or list:v1,v2,...");
  sub->add_option("--center", o.center, "base ball center id");
  sub->add_option("--radius", o.radius, "base ball radius");
  sub->add_option("--balls", o.balls, "JSON list of balls");
  sub->add_option("--decomposition", o.decomposition, "Boman decomposition JSON");
  sub->add_option("--budget", o.budget, "constant budget");
  sub->add_option("--mode", o.mode, "packing mode: exact, greedy or auto");
  sub->add_flag("--force", o.force, "run exact packing without a state budget");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--output", o.output, "json or text")->check(CLI::IsMember({"json", "text"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal medians, median BMO and John-Nirenberg norms on finite metric measure spaces"};
  app.require_subcommand(1);
  Opts o;
  using Handler = Outcome (*)(const Opts&);
  std::vector<std::pair<CLI::App*, Handler>> handlers;
  auto add = [&](const char* name, const char* help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, o);
    handlers.emplace_back(sub, h);
    return sub;
  };
  add("doubling", "doubling constant and ratio certificate", cmd_doubling);
  add("median", "maximal s-median over a set", cmd_median);
  add("oscillation", "median (--s) and integral (--q) oscillation", cmd_oscillation);
  add("bmo", "median BMO norm", cmd_bmo);
  add("jn-median", "median John-Nirenberg norm", cmd_jn_median);
  add("jn-integral", "integral John-Nirenberg norm", cmd_jn_integral);
  add("five-cover", "5-covering of a ball family", cmd_five_cover);
  add("cz", "Calderon-Zygmund decomposition", cmd_cz);
  add("good-lambda", "good-lambda inequality", cmd_good_lambda);
  add("verify-local-jn", "local John-Nirenberg inequality", cmd_local);
  add("verify-global-jn", "John-Nirenberg inequality on a Boman decomposition", cmd_global);
  auto* boman = add("verify-boman", "verify or construct a Boman decomposition", cmd_boman);
  boman->add_option("--granularity", o.granularity, "half-width of grid balls in grid steps");
  boman->add_option("--out-decomposition", o.out_decomposition, "write the constructed decomposition");
  add("equivalence", "JN_{p,q} versus JN_{p,0,s}", cmd_equivalence);
  auto* gen = add("generate", "generate a space and optionally a function", cmd_generate);
  gen->add_option("--kind", o.kind, "grid or dyadic");
  gen->add_option("--dim", o.dim, "grid dimension (1 or 2)");
  gen->add_option("--n", o.n, "points per axis");
  gen->add_option("--levels", o.levels, "dyadic levels");
  gen->add_option("--spacing", o.spacing, "grid spacing");
  gen->add_option("--weights", o.weights, "uniform, normalized or random");
  gen->add_option("--function-kind", o.function_kind, "function kind");
  gen->add_option("--param", o.params, "function parameter key=value");
  gen->add_option("--out-space", o.out_space, "write the space here");
  gen->add_option("--out-function", o.out_function, "write the function here");
  auto* all = add("verify-all", "run the acceptance suite", cmd_verify_all);
  all->add_option("--threads", o.threads, "worker threads");
  all->add_option("--fixtures", o.fixtures, "fixture directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& [sub, handler] : handlers) {
      if (!sub->parsed()) continue;
      const Outcome out = handler(o);
      Json report = out.report;
      if (!out.pass) report["violated"] = out.violated;
      if (o.output == "text") {
        print_text(report, "", std::cout);
      } else {
        std::cout << report.dump(2) << '\n';
      }
      if (!out.pass) std::cerr << "violated: " << out.violated << '\n';
      return out.pass ? 0 : 1;
    }
  } catch (const medjn::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
