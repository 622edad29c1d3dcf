#include "medjn/median.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "medjn/error.hpp"
#include "medjn/kernels.hpp"

namespace medjn {

namespace {

void check_level(double s) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorCode::InvalidS, "median level s must lie in (0, 1]");
}

}  // namespace

void validate_function(const Space& space, const SampleFunction& f) {
  if (f.size() != space.size()) throw Error(ErrorCode::InvalidParams, "function does not cover the space");
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f.values[i]))
      throw Error(ErrorCode::NonFiniteValue, "value at '" + space.id(i) + "' is not finite");
}

WeightedSample WeightedSample::gather(const Space& space, std::span<const double> f, const PointSet& set) {
  WeightedSample s;
  s.values.reserve(set.size());
  s.weights.reserve(set.size());
  for (PointIndex i : set) {
    s.values.push_back(f[i]);
    s.weights.push_back(space.weight(i));
    s.total += space.weight(i);
  }
  return s;
}

double maximal_median(std::span<const double> values, std::span<const double> weights, double s) {
  check_level(s);
  if (values.empty()) throw Error(ErrorCode::EmptySet, "median of an empty set");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double limit = s * total;

  // Walk distinct values downward; `above` is mu{f > current value}.
  double above = 0.0;
  double answer = values[order.front()];
  std::size_t i = 0;
  while (i < order.size()) {
    const double v = values[order[i]];
    if (!(above < limit)) break;
    answer = v;
    while (i < order.size() && values[order[i]] == v) above += weights[order[i++]];
  }
  return answer;
}

double maximal_median(const WeightedSample& sample, double s) { return maximal_median(sample.values, sample.weights, s); }

double maximal_median(const Space& space, const SampleFunction& f, const PointSet& set, double s) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "median of an empty set");
  return maximal_median(WeightedSample::gather(space, f.values, set), s);
}

bool is_s_median(double value, const WeightedSample& sample, double s) {
  check_level(s);
  if (sample.values.empty()) throw Error(ErrorCode::EmptySet, "median of an empty set");
  const auto& k = kernels::active();
  const double above = k.mass_above(sample.values, sample.weights, value);
  const double below = k.mass_below(sample.values, sample.weights, value);
  return above <= s * sample.total && below <= (1.0 - s) * sample.total;
}

bool is_s_median(double value, const Space& space, const SampleFunction& f, const PointSet& set, double s) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "median of an empty set");
  return is_s_median(value, WeightedSample::gather(space, f.values, set), s);
}

double centered_median(const WeightedSample& sample, double c, double s) {
  std::vector<double> dev(sample.values.size());
  kernels::active().abs_deviation(sample.values, c, dev);
  return maximal_median(dev, sample.weights, s);
}

Oscillation median_oscillation(const WeightedSample& sample, double s) {
  check_level(s);
  const std::size_t n = sample.values.size();
  if (n == 0) throw Error(ErrorCode::EmptySet, "oscillation over an empty set");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sample.values[a] < sample.values[b]; });
  std::vector<double> v(n);
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = sample.values[order[i]];
    prefix[i + 1] = prefix[i] + sample.weights[order[i]];
  }
  const double total = prefix[n];
  const double limit = s * total;

  // Window [v[i], v[j]] keeps everything with value in that range; the mass
  // left outside is prefix[lo(i)] + total - prefix[hi(j)] with ties included.
  Oscillation best{std::numeric_limits<double>::infinity(), 0.0};
  std::size_t j = 0;
  std::size_t i = 0;
  while (i < n) {
    // i: first index of a distinct value
    if (j < i) j = i;
    auto outside = [&](std::size_t jj) {
      std::size_t hi = jj + 1;
      while (hi < n && v[hi] == v[jj]) ++hi;
      return prefix[i] + (total - prefix[hi]);
    };
    while (j < n && !(outside(j) < limit)) ++j;
    if (j == n) break;  // larger i only loses mass on the left
    const double h = 0.5 * (v[j] - v[i]);
    const double c = 0.5 * (v[i] + v[j]);
    if (h < best.value || (h == best.value && c < best.center)) best = {h, c};
    const double cur = v[i];
    while (i < n && v[i] == cur) ++i;
  }
  return best;
}

Oscillation median_oscillation(const Space& space, const SampleFunction& f, const PointSet& set, double s) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "oscillation over an empty set");
  return median_oscillation(WeightedSample::gather(space, f.values, set), s);
}

}  // namespace medjn
