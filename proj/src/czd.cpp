#include "medjn/czd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "medjn/covering.hpp"
#include "medjn/error.hpp"
#include "medjn/kernels.hpp"

namespace medjn {

namespace {

constexpr double kRelSlack = 1e-12;

PointSet members_within(const Space& space, PointIndex center, double d) {
  PointSet out;
  for (PointIndex p : space.by_distance(center)) {
    if (space.distance(center, p) > d) break;
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool better_witness(const Ball& a, std::size_t ia, const Ball& b, std::size_t ib) {
  if (a.radius != b.radius) return a.radius > b.radius;
  if (a.center != b.center) return a.center < b.center;
  return ia < ib;
}

// Largest-radius family ball containing x whose median exceeds lambda.
std::optional<std::size_t> witness(const CZContext& ctx, PointIndex x, double lambda) {
  std::optional<std::size_t> best;
  for (std::size_t i : ctx.containing(x)) {
    if (!(ctx.family_median(i) > lambda)) continue;
    if (!best || better_witness(ctx.family()[i], i, ctx.family()[*best], *best)) best = i;
  }
  return best;
}

CZCertificate certify(const CZContext& ctx, double lambda, const PointSet& level_set, const std::vector<Ball>& balls) {
  const Space& space = ctx.space();
  const CZParams& prm = ctx.params();
  CZCertificate cert;
  cert.threshold_radius = ctx.threshold_radius_holds();
  std::ostringstream why;

  PointSet inner;
  PointSet outer;
  for (const Ball& b : balls) {
    inner = set_union(inner, b.members);
    outer = set_union(outer, dilate(space, b, 5.0).members);
  }
  cert.sandwich = is_subset(inner, level_set) && is_subset(level_set, outer);
  if (!cert.sandwich) why << "sandwich fails; ";

  const double radius_cap = prm.eta / 5.0 * prm.base.radius * (1.0 + kRelSlack);
  cert.radius_bound = std::all_of(balls.begin(), balls.end(), [&](const Ball& b) { return b.radius <= radius_cap; });
  if (!cert.radius_bound) why << "radius bound fails; ";

  cert.exceeds_level =
      std::all_of(balls.begin(), balls.end(), [&](const Ball& b) { return ctx.median_of(b.members) > lambda; });
  if (!cert.exceeds_level) why << "median does not exceed lambda; ";

  cert.stopping = true;
  const double limit = prm.eta * prm.base.radius;
  for (const Ball& b : balls) {
    std::vector<PointSet> dilates;
    if (2.0 * b.radius <= limit) dilates.push_back(ball_at(space, b.center, 2.0 * b.radius).members);
    for (double d : space.shells(b.center))
      if (d >= 2.0 * b.radius && d < limit) dilates.push_back(members_within(space, b.center, d));
    for (const PointSet& m : dilates) {
      ++cert.stopping_checks;
      if (ctx.median_of(m) > lambda) {
        cert.stopping = false;
        why << "dilate of ball at '" << space.id(b.center) << "' exceeds lambda; ";
      }
    }
  }
  if (!cert.threshold_radius) why << "radius bound for balls above the threshold fails; ";
  cert.failure = why.str();
  return cert;
}

CZDecomposition decompose_with(const CZContext& ctx, double lambda, const PointSet& level_set,
                               const std::vector<std::size_t>& witness_ids) {
  std::vector<Ball> witnesses;
  witnesses.reserve(witness_ids.size());
  for (std::size_t i : witness_ids) witnesses.push_back(ctx.family()[i]);
  const CoverResult cover = five_cover(ctx.space(), witnesses);

  CZDecomposition out;
  out.lambda = lambda;
  out.threshold = ctx.threshold();
  out.level_set = level_set;
  for (std::size_t idx : cover.selected) out.balls.push_back(witnesses[idx]);
  out.certificate = certify(ctx, lambda, level_set, out.balls);
  return out;
}

void check_level_preconditions(const CZContext& ctx, const PointSet& level_set, double lambda) {
  if (level_set.empty()) throw Error(ErrorCode::EmptyLevelSet, "no point of the dilated base exceeds lambda");
  if (ctx.threshold() > lambda) {
    std::ostringstream msg;
    msg << "m^{t/alpha}(B^_0) = " << ctx.threshold() << " exceeds lambda = " << lambda;
    throw Error(ErrorCode::ThresholdViolated, msg.str());
  }
}

}  // namespace

double alpha_of(const DoublingProfile& profile, double eta) {
  const double D = profile.dimension;
  return std::pow(5.0, D) * profile.c_mu * profile.c_mu * std::pow(1.0 + 1.0 / eta, D);
}

double s0_of(const DoublingProfile& profile, double alpha) {
  const double c3 = profile.c_mu * profile.c_mu * profile.c_mu;
  return std::min(1.0 / (2.0 * alpha), 1.0 / (8.0 * c3));
}

double local_jn_constant(double p, double c_mu) {
  return std::pow(2.0, p + 3.0) * std::pow(c_mu, 6.0) / std::pow(std::pow(2.0, 1.0 / p) - 1.0, p);
}

CZParams make_cz_params(const Space& space, const Ball& base, double eta, double p, double t, std::optional<double> K,
                        std::optional<DoublingProfile> profile) {
  if (base.members.empty()) throw Error(ErrorCode::EmptyBase, "base ball has no points");
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidParams, "eta must be positive");
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidParams, "p must exceed 1");
  if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidLevel, "t must lie in (0, 1]");
  CZParams prm;
  prm.base = base;
  prm.base_hat = dilate(space, base, 1.0 + eta);
  prm.eta = eta;
  prm.t = t;
  prm.p = p;
  prm.profile = profile ? *profile : doubling_profile(space);
  prm.alpha = alpha_of(prm.profile, eta);
  prm.s0 = s0_of(prm.profile, prm.alpha);
  prm.K = K ? *K : std::pow(2.0, 1.0 / p);
  if (!(prm.K > 1.0)) throw Error(ErrorCode::InvalidParams, "K must exceed 1");
  const double c = prm.profile.c_mu;
  prm.beta = 2.0 * std::pow(prm.K, p) * c * c * c;
  return prm;
}

std::vector<Ball> cz_family(const Space& space, const Ball& base, double eta) {
  if (base.members.empty()) throw Error(ErrorCode::EmptyBase, "base ball has no points");
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidParams, "eta must be positive");
  const double limit = eta * base.radius;
  std::map<PointSet, Ball> unique;
  for (PointIndex c : base.members) {
    const auto sh = space.shells(c);
    std::vector<Ball> shells = center_shells(space, c);
    // the member set {d <= sh[j]} needs a radius above sh[j]
    for (std::size_t j = 0; j < shells.size() && sh[j] < limit; ++j) {
      Ball& b = shells[j];
      b.radius = std::min(b.radius, limit);
      auto it = unique.find(b.members);
      if (it == unique.end()) {
        unique.emplace(b.members, std::move(b));
      } else if (b.radius > it->second.radius || (b.radius == it->second.radius && b.center < it->second.center)) {
        it->second = std::move(b);
      }
    }
  }
  std::vector<Ball> out;
  out.reserve(unique.size());
  for (auto& [_, b] : unique) out.push_back(std::move(b));
  std::sort(out.begin(), out.end(), [](const Ball& a, const Ball& b) {
    return a.center != b.center ? a.center < b.center : a.radius < b.radius;
  });
  return out;
}

double median_maximal(const Space& space, const SampleFunction& f, PointIndex x, std::span<const Ball> family,
                      double t) {
  std::vector<double> abs_values(f.size());
  kernels::active().abs_deviation(f.values, 0.0, abs_values);
  double best = 0.0;
  for (const Ball& b : family) {
    if (!b.contains(x)) continue;
    const auto sample = WeightedSample::gather(space, abs_values, b.members);
    best = std::max(best, maximal_median(sample, t));
  }
  return best;
}

double sharp_maximal(const Space& space, const SampleFunction& f, PointIndex x, std::span<const Ball> family, double t,
                     double beta) {
  if (!(t > 0.0 && t <= 1.0) || !(beta > 0.0) || t / beta > 1.0)
    throw Error(ErrorCode::InvalidLevel, "t/beta must lie in (0, 1]");
  double best = 0.0;
  for (const Ball& b : family) {
    if (!b.contains(x)) continue;
    const auto sample = WeightedSample::gather(space, f.values, b.members);
    best = std::max(best, centered_median(sample, maximal_median(sample, t), t / beta));
  }
  return best;
}

CZContext::CZContext(const Space& space, const SampleFunction& f, CZParams params)
    : space_(&space), params_(std::move(params)) {
  validate_function(space, f);
  abs_values_.resize(f.size());
  kernels::active().abs_deviation(f.values, 0.0, abs_values_);
  family_ = cz_family(space, params_.base, params_.eta);
  medians_.reserve(family_.size());
  containing_.assign(space.size(), {});
  for (std::size_t i = 0; i < family_.size(); ++i) {
    medians_.push_back(median_of(family_[i].members));
    for (PointIndex x : family_[i].members) containing_[x].push_back(i);
  }
  threshold_ = maximal_median(WeightedSample::gather(space, abs_values_, params_.base_hat.members),
                              params_.t / params_.alpha);
  const double cap = params_.eta / 5.0 * params_.base.radius * (1.0 + kRelSlack);
  for (std::size_t i = 0; i < family_.size(); ++i) {
    if (medians_[i] > threshold_) {
      ++threshold_radius_checked_;
      if (family_[i].radius > cap) threshold_radius_holds_ = false;
    }
  }
}

double CZContext::median_of(const PointSet& members) const {
  return maximal_median(WeightedSample::gather(*space_, abs_values_, members), params_.t);
}

double CZContext::maximal(PointIndex x) const {
  double best = 0.0;
  for (std::size_t i : containing_[x]) best = std::max(best, medians_[i]);
  return best;
}

PointSet CZContext::level_set(double lambda) const {
  PointSet out;
  for (PointIndex x : params_.base_hat.members)
    if (maximal(x) > lambda) out.push_back(x);
  return out;
}

CZDecomposition cz_decompose(const CZContext& ctx, double lambda) {
  const PointSet level = ctx.level_set(lambda);
  check_level_preconditions(ctx, level, lambda);
  std::vector<std::size_t> ids;
  for (PointIndex x : level) ids.push_back(*witness(ctx, x, lambda));
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return decompose_with(ctx, lambda, level, ids);
}

bool NestedCZ::total() const {
  return std::all_of(containment.begin(), containment.end(), [](const auto& c) { return c.has_value(); });
}

NestedCZ cz_nested(const CZContext& ctx, double lambda_low, double lambda_high) {
  if (!(lambda_low <= lambda_high)) throw Error(ErrorCode::InvalidLevel, "lambda_low must not exceed lambda_high");
  NestedCZ out;
  out.high = cz_decompose(ctx, lambda_high);
  const PointSet low_level = ctx.level_set(lambda_low);
  check_level_preconditions(ctx, low_level, lambda_low);

  const auto& fam = ctx.family();
  std::vector<std::size_t> ids;
  for (PointIndex x : low_level) {
    const std::size_t fallback = *witness(ctx, x, lambda_low);
    const auto upper = witness(ctx, x, lambda_high);
    if (!upper) {
      ids.push_back(fallback);
      continue;
    }
    // Largest enclosing ball of the high-level witness still above the low
    // level; usable when its radius exceeds half of r_x(lambda_low).
    const Ball& inner = fam[*upper];
    std::optional<std::size_t> best;
    for (std::size_t i : ctx.containing(x)) {
      if (!(ctx.family_median(i) > lambda_low) || !is_subset(inner.members, fam[i].members)) continue;
      if (!best || better_witness(fam[i], i, fam[*best], *best)) best = i;
    }
    if (best && fam[*best].radius > 0.5 * fam[fallback].radius) {
      ids.push_back(*best);
    } else {
      ids.push_back(fallback);
      ++out.fallback_witnesses;
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  out.low = decompose_with(ctx, lambda_low, low_level, ids);

  std::vector<PointSet> five;
  for (const Ball& b : out.low.balls) five.push_back(dilate(ctx.space(), b, 5.0).members);
  for (const Ball& hb : out.high.balls) {
    std::optional<std::size_t> where;
    for (std::size_t j = 0; j < five.size(); ++j)
      if (is_subset(hb.members, five[j])) {
        where = j;
        break;
      }
    out.containment.push_back(where);
  }
  return out;
}

GoodLambdaResult good_lambda_sides(const Space& space, const SampleFunction& g, const CZParams& params, double s,
                                   double lambda, const PackingOptions& options) {
  if (!(params.t > 0.0 && params.t <= 0.5))
    throw Error(ErrorCode::PreconditionViolated, "t must lie in (0, 1/2]");
  if (!(lambda > 0.0)) throw Error(ErrorCode::PreconditionViolated, "lambda must be positive");
  const double p = params.p;
  const double K = params.K;
  const double c = params.profile.c_mu;
  const double s_max = params.t / (2.0 * std::pow(K, p) * c * c * c);
  if (!(s > 0.0 && s <= s_max)) {
    std::ostringstream msg;
    msg << "s = " << s << " exceeds t/(2 K^p c_mu^3) = " << s_max;
    throw Error(ErrorCode::PreconditionViolated, msg.str());
  }
  const CZContext ctx(space, g, params);
  if (ctx.level_set(K * lambda).empty()) throw Error(ErrorCode::PreconditionViolated, "E_{K lambda} is empty");
  if (ctx.threshold() > lambda)
    throw Error(ErrorCode::PreconditionViolated, "m^{t/alpha}_{|f|}(B^_0) exceeds lambda");

  GoodLambdaResult r;
  r.nested = cz_nested(ctx, lambda, K * lambda);
  if (!r.nested.total())
    throw Error(ErrorCode::PreconditionViolated, "a K lambda ball is not inside any 5-dilated lambda ball");
  const NormResult norm = jn_median_norm(space, g, params.base_hat.members, p, s, options);
  r.norm = norm.norm;
  r.norm_exact = norm.exact;
  for (const Ball& b : r.nested.high.balls) r.lhs += b.measure;
  double low_sum = 0.0;
  for (const Ball& b : r.nested.low.balls) low_sum += b.measure;
  r.rhs = std::pow(2.0, p) * c * c * c / std::pow(K - 1.0, p) * std::pow(r.norm / lambda, p) +
          low_sum / (2.0 * std::pow(K, p));
  r.pass = r.lhs <= r.rhs + 1e-9 * r.rhs;
  return r;
}

LambdaGrid LambdaGrid::log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw Error(ErrorCode::InvalidParams, "invalid log grid");
  LambdaGrid g;
  if (count == 1) {
    g.values.push_back(lo);
    return g;
  }
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g.values.push_back(lo * std::exp(step * static_cast<double>(i)));
  g.values.back() = hi;
  return g;
}

LambdaGrid LambdaGrid::list(std::vector<double> values) {
  for (double v : values)
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidParams, "lambda values must be positive");
  if (values.empty()) throw Error(ErrorCode::InvalidParams, "empty lambda list");
  return LambdaGrid{std::move(values)};
}

LambdaGrid LambdaGrid::parse(const std::string& spec) {
  auto fail = [&] { return Error(ErrorCode::Parse, "bad lambda grid '" + spec + "'"); };
  try {
    if (spec.rfind("log:", 0) == 0) {
      std::stringstream ss(spec.substr(4));
      std::string lo, hi, count;
      if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, count)) throw fail();
      return log_spaced(std::stod(lo), std::stod(hi), static_cast<std::size_t>(std::stoul(count)));
    }
    if (spec.rfind("list:", 0) == 0) {
      std::stringstream ss(spec.substr(5));
      std::vector<double> values;
      for (std::string item; std::getline(ss, item, ',');) values.push_back(std::stod(item));
      return list(std::move(values));
    }
  } catch (const std::invalid_argument&) {
    throw fail();
  } catch (const std::out_of_range&) {
    throw fail();
  }
  throw fail();
}

LocalJNReport local_jn_verify(const Space& space, const SampleFunction& f, const CZParams& params, double s,
                              double r_center, const std::optional<LambdaGrid>& grid, const PackingOptions& options) {
  validate_function(space, f);
  if (!(s > 0.0 && s <= params.s0)) {
    std::ostringstream msg;
    msg << "s = " << s << " is outside (0, s0 = " << params.s0 << "]";
    throw Error(ErrorCode::InvalidS, msg.str());
  }
  if (!(r_center >= s && r_center <= 0.5))
    throw Error(ErrorCode::InvalidCenterLevel, "centering level r must satisfy s <= r <= 1/2");
  const double p = params.p;

  LocalJNReport rep;
  rep.c_mu = params.profile.c_mu;
  rep.alpha = params.alpha;
  rep.s0 = params.s0;
  rep.constant_c = local_jn_constant(p, rep.c_mu);
  rep.center = maximal_median(space, f, params.base.members, r_center);

  std::vector<double> g(f.size());
  kernels::active().abs_deviation(f.values, rep.center, g);
  const double t = 0.5;
  rep.lambda0 = maximal_median(WeightedSample::gather(space, g, params.base_hat.members), t / params.alpha);

  const NormResult norm = jn_median_norm(space, f, params.base_hat.members, p, s, options);
  rep.norm = norm.norm;
  rep.norm_exact = norm.exact;

  const auto base = WeightedSample::gather(space, g, params.base.members);
  double gmax = 0.0;
  for (PointIndex x : params.base_hat.members) gmax = std::max(gmax, g[x]);

  LambdaGrid lambdas;
  if (grid) {
    lambdas = *grid;
  } else if (gmax == 0.0) {
    lambdas = LambdaGrid::log_spaced(1e-3, 1.0, 50);
  } else {
    const double lo = rep.lambda0 > 0.0 ? 1.01 * rep.lambda0 : 1e-3 * gmax;
    lambdas = LambdaGrid::log_spaced(std::min(lo, 2.0 * gmax), 2.0 * gmax, 50);
  }

  rep.pass = true;
  for (double lambda : lambdas.values) {
    LocalJNEntry e;
    e.lambda = lambda;
    e.lhs = kernels::active().mass_above(base.values, base.weights, lambda);
    e.rhs = rep.constant_c * std::pow(rep.norm / lambda, p);
    e.margin = e.rhs - e.lhs;
    e.pass = e.lhs <= e.rhs + kRelSlack * e.rhs;
    rep.pass = rep.pass && e.pass;
    rep.entries.push_back(e);
  }

  rep.trivial_lhs = params.base_hat.measure * std::pow(rep.lambda0, p);
  rep.trivial_rhs = std::pow(2.0, p) * std::pow(rep.norm, p);
  rep.trivial_pass = rep.trivial_lhs <= rep.trivial_rhs + kRelSlack * rep.trivial_rhs;
  return rep;
}

}  // namespace medjn
