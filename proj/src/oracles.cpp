#include "medjn/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace medjn::oracle {

double maximal_median(std::span<const double> values, std::span<const double> weights, double s) {
  double total = 0.0;
  for (double w : weights) total += w;
  double best = std::numeric_limits<double>::infinity();
  for (double a : values) {
    double above = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] > a) above += weights[i];
    if (above < s * total) best = std::min(best, a);
  }
  return best;
}

double centered_median(std::span<const double> values, std::span<const double> weights, double c, double s) {
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = std::fabs(values[i] - c);
  return maximal_median(dev, weights, s);
}

double oscillation_candidates(std::span<const double> values, std::span<const double> weights, double s) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i; j < values.size(); ++j)
      best = std::min(best, centered_median(values, weights, 0.5 * (values[i] + values[j]), s));
  return best;
}

double oscillation_grid_scan(std::span<const double> values, std::span<const double> weights, double s,
                             std::size_t points, double tol) {
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  auto F = [&](double c) { return centered_median(values, weights, c, s); };
  if (lo == hi) return F(lo);

  struct Cell {
    double a, b, fa, fb;
  };
  std::vector<Cell> work;
  double best = std::numeric_limits<double>::infinity();
  const double step = (hi - lo) / static_cast<double>(points - 1);
  double prev = F(lo);
  best = prev;
  for (std::size_t k = 1; k < points; ++k) {
    const double a = lo + step * static_cast<double>(k - 1);
    const double b = k + 1 == points ? hi : lo + step * static_cast<double>(k);
    const double fb = F(b);
    best = std::min(best, fb);
    work.push_back({a, b, prev, fb});
    prev = fb;
  }
  while (!work.empty()) {
    const Cell c = work.back();
    work.pop_back();
    const double bound = 0.5 * (c.fa + c.fb - (c.b - c.a));
    if (bound >= best - tol) continue;
    const double h = (c.b - c.a) / 10.0;
    double fa = c.fa;
    for (int k = 1; k <= 10; ++k) {
      const double a = c.a + h * (k - 1);
      const double b = k == 10 ? c.b : c.a + h * k;
      const double fb = k == 10 ? c.fb : F(b);
      best = std::min(best, fb);
      work.push_back({a, b, fa, fb});
      fa = fb;
    }
  }
  return best;
}

double integral_grid_scan(std::span<const double> values, std::span<const double> weights, double q,
                          std::size_t points) {
  double total = 0.0;
  for (double w : weights) total += w;
  auto F = [&](double c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * std::pow(std::fabs(values[i] - c), q);
    return acc / total;
  };
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  const double range = hi - lo;
  if (range == 0.0) return F(lo);
  double best = std::numeric_limits<double>::infinity();
  double arg = lo;
  while (hi - lo > 1e-13 * range) {
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) {
      const double c = lo + step * static_cast<double>(k);
      const double v = F(c);
      if (v < best) {
        best = v;
        arg = c;
      }
    }
    lo = std::max(*lo_it, arg - step);
    hi = std::min(*hi_it, arg + step);
    points = 101;
  }
  return best;
}

double exhaustive_packing(std::span<const PackingItem> items) {
  double best = 0.0;
  std::vector<const PointSet*> chosen;
  auto disjoint_from_chosen = [&](const PointSet& s) {
    for (const PointSet* c : chosen)
      for (PointIndex x : s)
        if (std::find(c->begin(), c->end(), x) != c->end()) return false;
    return true;
  };
  // every subset, pruning only on overlap
  auto rec = [&](auto&& self, std::size_t k, double total) -> void {
    if (k == items.size()) {
      best = std::max(best, total);
      return;
    }
    self(self, k + 1, total);
    if (disjoint_from_chosen(items[k].members)) {
      chosen.push_back(&items[k].members);
      self(self, k + 1, total + items[k].weight);
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

}  // namespace medjn::oracle
