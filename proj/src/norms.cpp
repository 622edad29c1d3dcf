#include "medjn/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "medjn/error.hpp"
#include "medjn/kernels.hpp"

namespace medjn {

std::string_view to_string(PackingMode mode) noexcept {
  switch (mode) {
    case PackingMode::Exact: return "exact";
    case PackingMode::Greedy: return "greedy";
    case PackingMode::Auto: return "auto";
  }
  return "exact";
}

namespace {

void require_region(const PointSet& region) {
  if (region.empty()) throw Error(ErrorCode::EmptyRegion, "region is empty");
}

void check_jn_exponents(double p, double s) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidParams, "p must satisfy 1 < p < inf");
  if (!(s > 0.0 && s <= 0.5)) throw Error(ErrorCode::InvalidS, "s must lie in (0, 1/2]");
}

double average_power_deviation(const WeightedSample& sample, double c, double q) {
  return kernels::active().weighted_abs_pow_sum(sample.values, sample.weights, c, q) / sample.total;
}

}  // namespace

double lp_norm(const Space& space, const SampleFunction& f, const PointSet& region, double p) {
  require_region(region);
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidParams, "p must be positive");
  const auto sample = WeightedSample::gather(space, f.values, region);
  const double sum = kernels::active().weighted_abs_pow_sum(sample.values, sample.weights, 0.0, p);
  return std::pow(sum, 1.0 / p);
}

double weak_lp_norm(const Space& space, std::span<const double> g, const PointSet& region, double p) {
  require_region(region);
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidParams, "p must be positive");
  std::vector<std::pair<double, double>> levels;
  levels.reserve(region.size());
  for (PointIndex i : region) levels.emplace_back(std::fabs(g[i]), space.weight(i));
  std::sort(levels.begin(), levels.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = 0.0;
  double mass = 0.0;
  std::size_t i = 0;
  while (i < levels.size()) {
    const double v = levels[i].first;
    while (i < levels.size() && levels[i].first == v) mass += levels[i++].second;
    if (v > 0.0) best = std::max(best, v * std::pow(mass, 1.0 / p));
  }
  return best;
}

Oscillation integral_oscillation(const WeightedSample& sample, double q) {
  if (!(q > 0.0)) throw Error(ErrorCode::NonPositiveQ, "q must be positive");
  if (sample.values.empty()) throw Error(ErrorCode::EmptySet, "oscillation over an empty set");
  const auto [lo_it, hi_it] = std::minmax_element(sample.values.begin(), sample.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) return {0.0, lo};

  Oscillation best{std::numeric_limits<double>::infinity(), lo};
  auto consider = [&](double c) {
    const double v = average_power_deviation(sample, c, q);
    if (v < best.value || (v == best.value && c < best.center)) best = {v, c};
  };

  // For q <= 1 the objective is concave between consecutive sample values,
  // so its minimum sits on one of them.
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (double c : sorted) consider(c);
  if (q <= 1.0) return best;

  // Convex for q > 1: golden-section search, then polish with the sample
  // values, the weighted mean and the weighted median.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = average_power_deviation(sample, x1, q);
  double f2 = average_power_deviation(sample, x2, q);
  const double tol = 1e-10 * std::max(std::fabs(hi - lo), std::max(std::fabs(lo), std::fabs(hi)));
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = average_power_deviation(sample, x1, q);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = average_power_deviation(sample, x2, q);
    }
  }
  consider(x1);
  consider(x2);
  consider(0.5 * (a + b));
  consider(kernels::active().weighted_sum(sample.values, sample.weights) / sample.total);
  consider(maximal_median(sample, 0.5));
  return best;
}

Oscillation integral_oscillation(const Space& space, const SampleFunction& f, const PointSet& set, double q) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "oscillation over an empty set");
  return integral_oscillation(WeightedSample::gather(space, f.values, set), q);
}

double bmo_median_norm(const Space& space, const SampleFunction& f, const PointSet& region, double s) {
  require_region(region);
  double best = 0.0;
  for (const Ball& b : canonical_balls(space, region))
    best = std::max(best, median_oscillation(space, f, b.members, s).value);
  return best;
}

NormResult packed_norm(const Space& space, const PointSet& region,
                       const std::function<double(const Ball&)>& oscillation, double exponent, double root,
                       const PackingOptions& options) {
  require_region(region);
  std::vector<Ball> balls = canonical_balls(space, region);
  std::vector<double> osc(balls.size());
  double osc_max = 0.0;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    osc[i] = oscillation(balls[i]);
    osc_max = std::max(osc_max, osc[i]);
  }

  NormResult result;
  result.mode = options.mode;
  result.exact = options.mode != PackingMode::Greedy;
  if (osc_max == 0.0) return result;

  // Terms are scaled by osc_max^exponent so large exponents stay finite.
  std::vector<PackingItem> items;
  std::vector<std::size_t> ball_of;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (osc[i] <= 0.0) continue;
    items.push_back({balls[i].members, balls[i].measure * std::pow(osc[i] / osc_max, exponent)});
    ball_of.push_back(i);
  }
  result.candidates = items.size();

  PackingSolution sol;
  switch (options.mode) {
    case PackingMode::Greedy:
      sol = pack_greedy(items);
      break;
    case PackingMode::Exact:
    case PackingMode::Auto:
      if (items.size() <= options.branch_and_bound_limit) {
        sol = pack_branch_and_bound(items);
      } else {
        sol = pack_frontier(items, space.size(), options.state_budget);
        if (!sol.optimal && options.force)
          sol = pack_frontier(items, space.size(), std::numeric_limits<std::size_t>::max());
      }
      if (!sol.optimal) {
        if (options.mode == PackingMode::Exact)
          throw Error(ErrorCode::ExactModeTooLarge,
                      std::to_string(items.size()) + " candidate balls exceed the exact search budget");
        sol = pack_greedy(items);
        result.exact = false;
        result.mode = PackingMode::Greedy;
      } else {
        result.mode = PackingMode::Exact;
      }
      break;
  }

  const double log_scale = exponent * std::log(osc_max);
  result.norm = sol.total > 0.0 ? std::exp((log_scale + std::log(sol.total)) / root) : 0.0;
  for (std::size_t k : sol.chosen) {
    const std::size_t i = ball_of[k];
    PackedBall pb{balls[i], osc[i], balls[i].measure * std::pow(osc[i], exponent)};
    result.packing.total += pb.term;
    result.packing.balls.push_back(std::move(pb));
  }
  return result;
}

NormResult jn_median_norm(const Space& space, const SampleFunction& f, const PointSet& region, double p, double s,
                          const PackingOptions& options) {
  check_jn_exponents(p, s);
  return packed_norm(
      space, region, [&](const Ball& b) { return median_oscillation(space, f, b.members, s).value; }, p, p, options);
}

NormResult jn_integral_norm(const Space& space, const SampleFunction& f, const PointSet& region, double p, double q,
                            const PackingOptions& options) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidParams, "p must satisfy 1 < p < inf");
  if (!(q > 0.0)) throw Error(ErrorCode::NonPositiveQ, "q must be positive");
  if (!(q < p)) throw Error(ErrorCode::InvalidParams, "q must be smaller than p");
  return packed_norm(
      space, region, [&](const Ball& b) { return integral_oscillation(space, f, b.members, q).value; }, p / q, p,
      options);
}

NormResult jn_median_centered(const Space& space, const SampleFunction& f, const PointSet& region, double p, double s,
                              double t, const PackingOptions& options) {
  check_jn_exponents(p, s);
  if (!(t >= s && t <= 0.5)) throw Error(ErrorCode::InvalidS, "centering level t must satisfy s <= t <= 1/2");
  return packed_norm(
      space, region,
      [&](const Ball& b) {
        const auto sample = WeightedSample::gather(space, f.values, b.members);
        return centered_median(sample, maximal_median(sample, t), s);
      },
      p, p, options);
}

}  // namespace medjn
