#include "medjn/acceptance.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "medjn/boman.hpp"
#include "medjn/covering.hpp"
#include "medjn/czd.hpp"
#include "medjn/error.hpp"
#include "medjn/generators.hpp"
#include "medjn/io.hpp"
#include "medjn/median.hpp"
#include "medjn/norms.hpp"
#include "medjn/oracles.hpp"
#include "medjn/packing.hpp"
#include "medjn/space.hpp"

namespace medjn::acceptance {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
bool coin(Rng& rng) { return pick(rng, 0, 1) == 1; }

// Collects assertion outcomes, keeping the first failure message.
struct Tally {
  CriterionResult r;
  template <class Msg>
  void check(bool ok, Msg&& msg) {
    if (ok) return;
    if (r.violations == 0) r.detail = msg();
    ++r.violations;
  }
  CriterionResult finish(std::size_t required, const std::string& summary) {
    r.pass = r.violations == 0 && r.instances >= required;
    if (r.violations == 0) {
      r.detail = summary;
      if (r.instances < required)
        r.detail += " (only " + std::to_string(r.instances) + " of " + std::to_string(required) + " instances)";
    }
    return r;
  }
};

bool leq(double a, double b, double rel = 1e-12) {
  return a <= b + rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}
bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

Space random_space(Rng& rng, std::size_t n, bool integer_weights) {
  const int dim = coin(rng) ? 1 : 2;
  SpaceInput in;
  std::set<std::vector<double>> used;
  const auto span = static_cast<double>(3 * n + 2);
  while (in.coords.size() < n) {
    std::vector<double> c;
    for (int a = 0; a < dim; ++a) c.push_back(std::floor(uniform(rng, 0.0, span)));
    if (used.insert(c).second) in.coords.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < n; ++i) {
    in.ids.push_back("p" + std::to_string(i));
    in.weights.push_back(integer_weights ? static_cast<double>(pick(rng, 1, 5)) : uniform(rng, 0.5, 1.5));
  }
  return Space::build(std::move(in));
}

std::vector<double> random_values(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  const int style = static_cast<int>(pick(rng, 0, 2));
  for (double& x : v) {
    if (style == 0) {
      x = static_cast<double>(static_cast<long>(pick(rng, 0, 10)) - 5);
    } else if (style == 1) {
      x = std::normal_distribution<double>(0.0, 3.0)(rng);
    } else {
      x = coin(rng) ? 0.0 : uniform(rng, -1.0, 1.0) * 100.0;
    }
  }
  return v;
}

std::vector<double> random_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  const bool integer = coin(rng);
  for (double& x : w) x = integer ? static_cast<double>(pick(rng, 1, 5)) : uniform(rng, 0.1, 2.0);
  return w;
}

double random_level(Rng& rng) {
  static const double special[] = {1.0, 0.5, 0.25, 1.0 / 3.0, 0.1};
  return coin(rng) ? special[pick(rng, 0, 4)] : uniform(rng, 1e-3, 1.0);
}

PointSet random_subset(Rng& rng, const PointSet& from, std::size_t min_size = 1) {
  PointSet out;
  while (out.size() < min_size) {
    out.clear();
    for (PointIndex x : from)
      if (coin(rng)) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------- 1

CriterionResult median_properties(const Options&, std::uint64_t seed) {
  Rng rng(seed);
  Tally t;
  const std::size_t kInstances = 1000;
  for (std::size_t inst = 0; inst < kInstances; ++inst) {
    const std::size_t n = pick(rng, 1, 20);
    const Space space = random_space(rng, n, coin(rng));
    SampleFunction f{random_values(rng, n)};
    const PointSet all = space.all_points();
    const PointSet A = random_subset(rng, all);
    const double s = random_level(rng);
    const auto tag = [&](const char* what) {
      return [=] { return std::string(what) + " fails on instance " + std::to_string(inst); };
    };
    const auto sample = WeightedSample::gather(space, f.values, A);
    const double m = maximal_median(sample, s);
    t.check(m == oracle::maximal_median(sample.values, sample.weights, s), tag("definition"));
    t.check(is_s_median(m, sample, s), tag("s-median"));

    // (i)
    const double s2 = uniform(rng, s, 1.0);
    t.check(maximal_median(sample, s2) <= m, tag("(i)"));
    // (ii)
    SampleFunction g = f;
    for (double& v : g.values) v += coin(rng) ? 0.0 : uniform(rng, 0.0, 2.0);
    t.check(m <= maximal_median(space, g, A, s), tag("(ii)"));
    // (iii)
    const PointSet Aprime = set_union(A, random_subset(rng, all));
    const double c = space.measure(Aprime) / space.measure(A) * (1.0 + 1e-9);
    t.check(m <= maximal_median(space, f, Aprime, s / c), tag("(iii)"));
    // (iv)
    {
      const int which = static_cast<int>(pick(rng, 0, 2));
      auto phi = [which](double x) {
        if (which == 0) return std::exp(x / 8.0);
        if (which == 1) return x * x * x + x;
        return std::atan(x);
      };
      SampleFunction h = f;
      for (double& v : h.values) v = phi(v);
      const double lhs = maximal_median(space, h, A, s);
      t.check(close(lhs, phi(m), 1e-12 * std::max(1.0, std::fabs(lhs))), tag("(iv)"));
    }
    // (v), (vi)
    {
      const double shift = uniform(rng, -10.0, 10.0);
      const double scale = uniform(rng, 0.01, 10.0);
      SampleFunction a = f;
      SampleFunction b = f;
      for (double& v : a.values) v += shift;
      for (double& v : b.values) v *= scale;
      const double ma = maximal_median(space, a, A, s);
      t.check(close(ma, m + shift, 1e-12 * std::max({1.0, std::fabs(ma), std::fabs(shift)})), tag("(v)"));
      const double mb = maximal_median(space, b, A, s);
      t.check(close(mb, scale * m, 1e-12 * std::max(1.0, std::fabs(mb))), tag("(vi)"));
    }
    // (vii) and the s <= 1/2 form
    SampleFunction absf = f;
    for (double& v : absf.values) v = std::fabs(v);
    if (s < 1.0) t.check(std::fabs(m) <= maximal_median(space, absf, A, std::min(s, 1.0 - s)), tag("(vii)"));
    if (s <= 0.5) {
      const double abs_s = maximal_median(space, absf, A, s);
      t.check(maximal_median(space, absf, A, 1.0 - s) <= abs_s, tag("half-level m^{1-s} <= m^s"));
      t.check(std::fabs(m) <= abs_s, tag("half-level |m^s_f| <= m^s_|f|"));
    }
    // (viii)
    {
      const double t1 = s * uniform(rng, 0.05, 0.95);
      const double t2 = (s - t1) * uniform(rng, 0.05, 1.0);
      SampleFunction h{random_values(rng, n)};
      SampleFunction sum = f;
      for (std::size_t i = 0; i < n; ++i) sum.values[i] += h.values[i];
      const double rhs = maximal_median(space, f, A, t1) + maximal_median(space, h, A, t2);
      t.check(leq(maximal_median(space, sum, A, s), rhs), tag("(viii)"));
    }
    // (ix)
    {
      const double p = uniform(rng, 0.25, 4.0);
      const auto as = WeightedSample::gather(space, absf.values, A);
      double acc = 0.0;
      for (std::size_t i = 0; i < as.values.size(); ++i) acc += as.weights[i] * std::pow(as.values[i], p);
      const double bound = std::pow(acc / as.total / s, 1.0 / p);
      t.check(leq(maximal_median(as, s), bound), tag("(ix)"));
    }
    // (x)
    {
      const std::size_t parts = pick(rng, 1, std::min<std::size_t>(4, A.size()));
      std::vector<PointSet> pieces(parts);
      for (std::size_t k = 0; k < A.size(); ++k) pieces[k < parts ? k : pick(rng, 0, parts - 1)].push_back(A[k]);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (auto& piece : pieces) {
        std::sort(piece.begin(), piece.end());
        const double mp = maximal_median(space, f, piece, s);
        lo = std::min(lo, mp);
        hi = std::max(hi, mp);
      }
      t.check(lo <= m && m <= hi, tag("(x)"));
    }
    ++t.r.instances;
  }
  return t.finish(kInstances, std::to_string(t.r.instances) + " instances, properties (i)-(x) and the s <= 1/2 form");
}

// ---------------------------------------------------------------- 2

CriterionResult oscillation_oracle(const Options&, std::uint64_t seed) {
  Rng rng(seed);
  Tally t;
  const std::size_t kInstances = 500;
  double worst_median = 0.0;
  double worst_integral = 0.0;
  for (std::size_t inst = 0; inst < kInstances; ++inst) {
    const std::size_t n = pick(rng, 1, 20);
    WeightedSample sample;
    sample.values = random_values(rng, n);
    sample.weights = random_weights(rng, n);
    for (double w : sample.weights) sample.total += w;
    const auto [lo, hi] = std::minmax_element(sample.values.begin(), sample.values.end());
    const double range = *hi - *lo;
    const double s = random_level(rng);

    const double alg = median_oscillation(sample, s).value;
    const double cand = oracle::oscillation_candidates(sample.values, sample.weights, s);
    const double grid = oracle::oscillation_grid_scan(sample.values, sample.weights, s, 10000, 1e-7 * range);
    t.check(close(alg, cand, 1e-12 * std::max(1.0, range)),
            [&] { return "median oscillation " + fmt(alg) + " vs candidates " + fmt(cand); });
    t.check(close(alg, grid, 1e-6 * range),
            [&] { return "median oscillation " + fmt(alg) + " vs grid " + fmt(grid); });
    if (range > 0) worst_median = std::max(worst_median, std::fabs(alg - grid) / range);

    const double q = coin(rng) ? static_cast<double>(pick(rng, 1, 3)) : uniform(rng, 1.0, 4.0);
    const double ialg = integral_oscillation(sample, q).value;
    const double igrid = oracle::integral_grid_scan(sample.values, sample.weights, q, 10000);
    const double rel = igrid > 0 ? std::fabs(ialg - igrid) / igrid : std::fabs(ialg);
    t.check(rel <= 1e-8, [&] { return "integral oscillation q=" + fmt(q) + ": " + fmt(ialg) + " vs " + fmt(igrid); });
    worst_integral = std::max(worst_integral, rel);
    ++t.r.instances;
  }
  return t.finish(kInstances, std::to_string(t.r.instances) + " instances, worst median gap " + fmt(worst_median) +
                                  " x range, worst integral gap " + fmt(worst_integral) + " relative");
}

// ---------------------------------------------------------------- 3

std::vector<PackingItem> random_items(Rng& rng) {
  std::vector<PackingItem> items;
  if (coin(rng)) {
    const std::size_t universe = pick(rng, 4, 16);
    const std::size_t count = pick(rng, 1, 12);
    for (std::size_t k = 0; k < count; ++k) {
      PointSet s;
      const std::size_t size = pick(rng, 1, std::min<std::size_t>(5, universe));
      while (s.size() < size) {
        const PointIndex x = pick(rng, 0, universe - 1);
        if (std::find(s.begin(), s.end(), x) == s.end()) s.push_back(x);
      }
      std::sort(s.begin(), s.end());
      items.push_back({std::move(s), coin(rng) ? static_cast<double>(pick(rng, 1, 4)) : uniform(rng, 0.01, 5.0)});
    }
  } else {
    const Space space = random_space(rng, pick(rng, 1, 4), coin(rng));
    for (const Ball& b : canonical_balls(space)) items.push_back({b.members, b.measure * uniform(rng, 0.0, 3.0)});
  }
  return items;
}

bool packing_consistent(std::span<const PackingItem> items, const PackingSolution& sol) {
  PointSet used;
  double total = 0.0;
  for (std::size_t i : sol.chosen) {
    if (intersects(used, items[i].members)) return false;
    used = set_union(used, items[i].members);
    total += items[i].weight;
  }
  return close(total, sol.total, 1e-12 * std::max(1.0, total));
}

CriterionResult packing_oracle(const Options&, std::uint64_t seed) {
  Rng rng(seed);
  Tally t;
  const std::size_t kInstances = 300;
  for (std::size_t inst = 0; inst < kInstances; ++inst) {
    const auto items = random_items(rng);
    const double truth = oracle::exhaustive_packing(items);
    const auto bnb = pack_branch_and_bound(items);
    const auto frontier = pack_frontier(items, 0, 1'000'000);
    const auto greedy = pack_greedy(items);
    const double tol = 1e-12 * std::max(1.0, truth);
    t.check(close(bnb.total, truth, tol) && packing_consistent(items, bnb),
            [&] { return "branch-and-bound " + fmt(bnb.total) + " vs exhaustive " + fmt(truth); });
    t.check(frontier.optimal && close(frontier.total, truth, tol) && packing_consistent(items, frontier),
            [&] { return "frontier " + fmt(frontier.total) + " vs exhaustive " + fmt(truth); });
    t.check(packing_consistent(items, greedy) && greedy.total <= truth + tol,
            [&] { return "greedy " + fmt(greedy.total) + " exceeds exact " + fmt(truth); });
    ++t.r.instances;
  }
  return t.finish(200, std::to_string(t.r.instances) + " instances with at most 12 candidates");
}

// ---------------------------------------------------------------- 4

CriterionResult centered_sandwich(const Options&, std::uint64_t seed) {
  Rng rng(seed);
  Tally t;
  const std::size_t kInstances = 250;
  for (std::size_t inst = 0; inst < kInstances; ++inst) {
    const std::size_t n = pick(rng, 1, 4);
    const Space space = random_space(rng, n, coin(rng));
    const SampleFunction f{random_values(rng, n)};
    const double p = uniform(rng, 1.1, 5.0);
    const double tl = uniform(rng, 1e-3, 0.5);
    const double s = coin(rng) ? tl : uniform(rng, 1e-3, tl);
    const PointSet all = space.all_points();
    const PackingOptions exact{PackingMode::Exact};
    const double np = std::pow(jn_median_norm(space, f, all, p, s, exact).norm, p);
    const double cp = std::pow(jn_median_centered(space, f, all, p, s, tl, exact).norm, p);
    t.check(leq(np, cp) && leq(cp, std::pow(2.0, p) * np), [&] {
      return "instance " + std::to_string(inst) + ": norm^p " + fmt(np) + ", centered " + fmt(cp);
    });
    ++t.r.instances;
  }
  return t.finish(200, std::to_string(t.r.instances) + " instances, norm^p <= centered <= 2^p norm^p");
}

// ---------------------------------------------------------------- 5

CriterionResult norm_chain(const Options&, std::uint64_t seed) {
  Rng rng(seed);
  Tally t;
  const std::size_t kInstances = 240;
  const double fixed[3][3] = {{2.0, 1.0, 0.25}, {3.0, 2.0, 0.125}, {1.5, 1.0, 0.125}};
  for (std::size_t inst = 0; inst < kInstances; ++inst) {
    double p, q, s;
    if (inst % 4 < 3) {
      p = fixed[inst % 4][0];
      q = fixed[inst % 4][1];
      s = fixed[inst % 4][2];
    } else {
      p = uniform(rng, 1.05, 6.0);
      q = uniform(rng, 0.1, p * 0.999);
      s = uniform(rng, 1e-3, 0.5);
    }
    const std::size_t n = pick(rng, 1, 6);
    const Space space = random_space(rng, n, coin(rng));
    const SampleFunction f{random_values(rng, n)};
    const PointSet all = space.all_points();
    const PackingOptions exact{PackingMode::Exact};
    const double jm = jn_median_norm(space, f, all, p, s, exact).norm;
    const double jq = jn_integral_norm(space, f, all, p, q, exact).norm;
    const double lp = lp_norm(space, f, all, p);
    const double bmo = bmo_median_norm(space, f, all, s);
    t.check(leq(std::pow(s, 1.0 / q) * jm, jq), [&] {
      return "lower bound fails (p,q,s)=(" + fmt(p) + "," + fmt(q) + "," + fmt(s) + "): " +
             fmt(std::pow(s, 1.0 / q) * jm) + " > " + fmt(jq);
    });
    t.check(leq(jq, lp), [&] { return "JN_{p,q} " + fmt(jq) + " exceeds L^p " + fmt(lp); });
    t.check(leq(jm, std::pow(space.total_measure(), 1.0 / p) * bmo),
            [&] { return "BMO bound fails: " + fmt(jm) + " vs " + fmt(bmo); });
    ++t.r.instances;
  }
  return t.finish(200, std::to_string(t.r.instances) + " instances, s^{1/q} JN_{p,0,s} <= JN_{p,q} <= L^p and BMO bound");
}

// ---------------------------------------------------------------- 6

CriterionResult bmo_limit(const Options&, std::uint64_t seed) {
  Rng rng(seed);
  Tally t;
  const std::size_t kInstances = 60;
  double worst = 0.0;
  for (std::size_t inst = 0; inst < kInstances; ++inst) {
    const std::size_t n = pick(rng, 1, 10);
    SpaceInput in;
    std::set<double> used;
    while (in.coords.size() < n) {
      const double x = std::floor(uniform(rng, 0.0, 40.0));
      if (used.insert(x).second) in.coords.push_back({x});
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      in.ids.push_back("p" + std::to_string(i));
      in.weights.push_back(uniform(rng, 0.5, 1.5));
      total += in.weights.back();
    }
    for (double& w : in.weights) w /= total;
    const Space space = Space::build(std::move(in));
    const SampleFunction f{random_values(rng, n)};
    const double s = uniform(rng, 1e-3, 0.5);
    const PointSet all = space.all_points();
    double prev = 0.0;
    double last = 0.0;
    for (double p : {4.0, 16.0, 64.0, 200.0}) {
      const double v = jn_median_norm(space, f, all, p, s, {PackingMode::Exact}).norm;
      t.check(leq(prev, v), [&] { return "not monotone at p=" + fmt(p) + ": " + fmt(prev) + " > " + fmt(v); });
      prev = v;
      last = v;
    }
    const double bmo = bmo_median_norm(space, f, all, s);
    const double gap = std::fabs(last - bmo);
    t.check(gap <= 0.02 * bmo, [&] { return "JN_200 " + fmt(last) + " vs BMO " + fmt(bmo); });
    if (bmo > 0) worst = std::max(worst, gap / bmo);
    ++t.r.instances;
  }
  return t.finish(50, std::to_string(t.r.instances) + " instances, worst |JN_200 - BMO|/BMO " + fmt(worst));
}

// ---------------------------------------------------------------- CZ configurations

struct Prepared {
  Space space;
  DoublingProfile profile;
};

// Deterministic spaces are built once per criterion run.
class SpaceCache {
 public:
  template <class Make>
  std::shared_ptr<const Prepared> get(const std::string& key, Make&& make) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto prep = prepare(make());
    cache_.emplace(key, prep);
    return prep;
  }
  static std::shared_ptr<const Prepared> prepare(Space space) {
    DoublingProfile profile = doubling_profile(space);
    return std::make_shared<const Prepared>(Prepared{std::move(space), std::move(profile)});
  }

 private:
  std::map<std::string, std::shared_ptr<const Prepared>> cache_;
};

struct CZConfig {
  std::shared_ptr<const Prepared> prep;
  Ball base;
  double eta = 1.0;
  SampleFunction f;
  std::string label;

  [[nodiscard]] const Space& space() const { return prep->space; }
  [[nodiscard]] CZParams params(double p, double t = 0.5, std::optional<double> K = std::nullopt) const {
    return make_cz_params(prep->space, base, eta, p, t, K, prep->profile);
  }
};

SampleFunction random_cz_function(Rng& rng, const Space& space, const Ball& base) {
  const int kind = coin(rng) ? 0 : static_cast<int>(pick(rng, 1, 4));
  const std::uint64_t s = rng();
  switch (kind) {
    case 0: {
      SampleFunction f{std::vector<double>(space.size(), 0.0)};
      const std::size_t spikes = pick(rng, 1, 3);
      for (std::size_t k = 0; k < spikes; ++k)
        f.values[base.members[pick(rng, 0, base.members.size() - 1)]] = uniform(rng, 1.0, 20.0);
      return f;
    }
    case 1:
      return canonical_function("step", space, {{"levels", static_cast<double>(pick(rng, 2, 5))}}, s);
    case 2:
      return canonical_function("log_blowup", space, {}, s);
    case 3:
      return canonical_function("random_piecewise", space, {{"pieces", static_cast<double>(pick(rng, 2, 8))}}, s);
    default:
      return canonical_function("two_valued", space, {{"a", 0.0}, {"b", uniform(rng, 1.0, 5.0)}}, s);
  }
}

CZConfig random_dyadic_config(Rng& rng, SpaceCache& cache) {
  CZConfig c;
  const auto levels = static_cast<unsigned>(pick(rng, 4, 8));
  const bool uniform_weights = pick(rng, 0, 3) != 0;
  const std::uint64_t weight_seed = rng();
  if (uniform_weights) {
    c.prep = cache.get("dyadic" + std::to_string(levels), [&] { return dyadic_space(levels); });
  } else {
    c.prep = SpaceCache::prepare(dyadic_space(levels, WeightProfile::Random, weight_seed));
  }
  const auto k = static_cast<int>(pick(rng, 0, levels - 2));
  c.base = ball_at(c.space(), pick(rng, 0, c.space().size() - 1), std::ldexp(1.0, k));
  static const double etas[] = {1.0, 2.0, 4.0, 8.0, 16.0};
  c.eta = etas[pick(rng, 0, 4)];
  c.f = random_cz_function(rng, c.space(), c.base);
  c.label = "dyadic L=" + std::to_string(levels) + " |B0|=" + std::to_string(c.base.members.size()) +
            " eta=" + fmt(c.eta);
  return c;
}

CZConfig random_grid_config(Rng& rng, SpaceCache& cache) {
  CZConfig c;
  const int dim = coin(rng) ? 1 : 2;
  const std::size_t n = dim == 1 ? pick(rng, 4, 64) : pick(rng, 2, 8);
  c.prep = cache.get("grid" + std::to_string(dim) + "x" + std::to_string(n), [&] { return grid_space(dim, n, 1.0); });
  c.base = ball_at(c.space(), pick(rng, 0, c.space().size() - 1), uniform(rng, 1.0, static_cast<double>(n)));
  c.eta = uniform(rng, 0.5, 4.0);
  c.f = random_cz_function(rng, c.space(), c.base);
  c.label = std::to_string(dim) + "-D grid n=" + std::to_string(n);
  return c;
}

double max_maximal(const CZContext& ctx) {
  double m = 0.0;
  for (PointIndex x : ctx.params().base_hat.members) m = std::max(m, ctx.maximal(x));
  return m;
}

// ---------------------------------------------------------------- 7

CriterionResult covering_suite(const Options&, std::uint64_t seed) {
  Rng rng(seed);
  SpaceCache cache;
  Tally t;
  const std::size_t kFamilies = 500;
  for (std::size_t inst = 0; inst < kFamilies; ++inst) {
    const std::size_t n = pick(rng, 1, 30);
    const Space space = random_space(rng, n, coin(rng));
    std::vector<Ball> family;
    const std::size_t count = pick(rng, 1, 15);
    for (std::size_t k = 0; k < count; ++k) {
      const PointIndex c = pick(rng, 0, n - 1);
      const PointIndex other = pick(rng, 0, n - 1);
      const double r = other == c ? uniform(rng, 0.1, 3.0) : space.distance(c, other) * uniform(rng, 0.5, 1.5);
      family.push_back(ball_at(space, c, r));
    }
    const CoverResult cover = five_cover(space, family);
    bool disjoint = true;
    for (std::size_t a = 0; a < cover.selected.size(); ++a)
      for (std::size_t b = a + 1; b < cover.selected.size(); ++b)
        if (intersects(family[cover.selected[a]].members, family[cover.selected[b]].members)) disjoint = false;
    t.check(disjoint, [&] { return "selected balls overlap in family " + std::to_string(inst); });
    PointSet covered;
    PointSet wanted;
    for (std::size_t sel : cover.selected) covered = set_union(covered, dilate(space, family[sel], 5.0).members);
    bool each = cover.covered_by.size() == family.size();
    for (std::size_t k = 0; k < family.size(); ++k) {
      wanted = set_union(wanted, family[k].members);
      if (each)
        each = is_subset(family[k].members, dilate(space, family[cover.selected[cover.covered_by[k]]], 5.0).members);
    }
    t.check(each && is_subset(wanted, covered), [&] { return "5-dilates miss a ball in family " + std::to_string(inst); });
    ++t.r.instances;
  }

  // radius bound on CZ families wherever some ball exceeds the threshold
  std::size_t fired = 0;
  for (std::size_t inst = 0; inst < 300; ++inst) {
    const CZConfig c = inst % 2 == 0 ? random_dyadic_config(rng, cache) : random_grid_config(rng, cache);
    const CZParams prm = c.params(2.0, coin(rng) ? 0.5 : uniform(rng, 0.05, 1.0));
    const CZContext ctx(c.space(), c.f, prm);
    fired += ctx.threshold_radius_checked();
    t.check(ctx.threshold_radius_holds(), [&] { return "radius bound fails on " + c.label; });
  }
  return t.finish(kFamilies, std::to_string(t.r.instances) + " families; radius bound checked on " +
                                 std::to_string(fired) + " balls above the threshold");
}

// ---------------------------------------------------------------- 8

CriterionResult cz_suite(const Options&, std::uint64_t seed) {
  Rng rng(seed);
  SpaceCache cache;
  Tally t;
  const std::size_t kRequired = 200;
  std::size_t named_errors = 0;
  std::size_t attempts = 0;
  while (t.r.instances < kRequired && attempts < 5000) {
    ++attempts;
    const bool dyadic = attempts % 4 != 0;
    const CZConfig c = dyadic ? random_dyadic_config(rng, cache) : random_grid_config(rng, cache);
    const CZParams prm = c.params(2.0);
    const CZContext ctx(c.space(), c.f, prm);
    const double top = max_maximal(ctx);
    const double thr = ctx.threshold();

    // precondition failures must raise the named errors
    auto expect = [&](double lambda, ErrorCode code, const char* name) {
      try {
        (void)cz_decompose(ctx, lambda);
        t.check(false, [&] { return std::string("expected ") + name + " on " + c.label; });
      } catch (const Error& e) {
        t.check(e.code() == code, [&] { return std::string("expected ") + name + ", got " + e.what(); });
        ++named_errors;
      }
    };
    expect(top, ErrorCode::EmptyLevelSet, "EmptyLevelSet");
    if (thr > 0.0)
      expect(0.5 * thr, top > 0.5 * thr ? ErrorCode::ThresholdViolated : ErrorCode::EmptyLevelSet,
             top > 0.5 * thr ? "ThresholdViolated" : "EmptyLevelSet");
    if (!(top > thr)) {
      ++t.r.skipped;
      continue;
    }

    const double high = thr + (top - thr) * uniform(rng, 0.0, 1.0);
    if (!(high >= thr && high < top)) {
      ++t.r.skipped;
      continue;
    }
    const CZDecomposition d = cz_decompose(ctx, high);
    t.check(d.certificate.all(), [&] { return "certificate fails on " + c.label + ": " + d.certificate.failure; });
    const double low = thr + (high - thr) * uniform(rng, 0.0, 1.0);
    const NestedCZ nested = cz_nested(ctx, low, high);
    t.check(nested.low.certificate.all() && nested.high.certificate.all(),
            [&] { return "nested certificate fails on " + c.label + ": " + nested.low.certificate.failure; });
    t.check(nested.total(), [&] { return "containment not total on " + c.label; });
    ++t.r.instances;
  }
  return t.finish(kRequired, std::to_string(t.r.instances) + " decompositions with certificates (i)-(iv) and total " +
                                 "containment; " + std::to_string(named_errors) + " named precondition errors; " +
                                 std::to_string(t.r.skipped) + " vacuous configurations");
}

// ---------------------------------------------------------------- 9

CriterionResult good_lambda_suite(const Options&, std::uint64_t seed) {
  Rng rng(seed);
  SpaceCache cache;
  Tally t;
  const std::size_t kRequired = 100;
  std::size_t attempts = 0;
  double worst = 0.0;
  while (t.r.instances < kRequired && attempts < 3000) {
    ++attempts;
    const CZConfig c = attempts % 5 != 0 ? random_dyadic_config(rng, cache) : random_grid_config(rng, cache);
    static const double ps[] = {1.5, 2.0, 3.0};
    const double p = ps[pick(rng, 0, 2)];
    const std::optional<double> K = coin(rng) ? std::nullopt : std::optional<double>(uniform(rng, 1.05, 3.0));
    const CZParams prm = c.params(p, 0.5, K);
    const double cm = prm.profile.c_mu;
    const double s_max = prm.t / (2.0 * std::pow(prm.K, p) * cm * cm * cm);
    const double s = coin(rng) ? s_max : s_max * uniform(rng, 0.05, 1.0);
    const CZContext ctx(c.space(), c.f, prm);
    const double top = max_maximal(ctx);
    const double thr = ctx.threshold();
    const double hi = top / prm.K;
    if (!(hi > thr) || !(hi > 0.0)) {
      ++t.r.skipped;
      continue;
    }
    const double lambda = std::max(thr, 1e-12 * hi) + (hi - std::max(thr, 1e-12 * hi)) * uniform(rng, 0.0, 0.999);
    try {
      const GoodLambdaResult r = good_lambda_sides(c.space(), c.f, prm, s, lambda);
      t.check(r.pass, [&] { return "lhs " + fmt(r.lhs) + " > rhs " + fmt(r.rhs) + " on " + c.label; });
      if (r.rhs > 0) worst = std::max(worst, r.lhs / r.rhs);
      ++t.r.instances;
    } catch (const Error& e) {
      t.check(e.code() == ErrorCode::PreconditionViolated, [&] { return std::string("unexpected error ") + e.what(); });
      ++t.r.skipped;
    }
  }
  return t.finish(kRequired, std::to_string(t.r.instances) + " configurations, max lhs/rhs " + fmt(worst) + "; " +
                                 std::to_string(t.r.skipped) + " rejected by preconditions");
}

// ---------------------------------------------------------------- 10

struct Fixture {
  Space space;
  SampleFunction f;
};

Fixture log64_fixture(const Options& opt) {
  if (!opt.fixtures_dir.empty()) {
    const auto dir = std::filesystem::path(opt.fixtures_dir);
    Space space = io::space_from_json(io::read_json_file((dir / "log64_space.json").string()));
    SampleFunction f = io::function_from_json(io::read_json_file((dir / "log64_function.json").string()), space);
    return {std::move(space), std::move(f)};
  }
  Space space = grid_space(1, 64, 1.0 / 64.0);
  SampleFunction f = canonical_function("log_blowup", space);
  return {std::move(space), std::move(f)};
}

CriterionResult local_jn_suite(const Options& opt, std::uint64_t seed) {
  Rng rng(seed);
  SpaceCache cache;
  Tally t;
  double worst = 0.0;
  std::size_t entries = 0;
  auto record = [&](const LocalJNReport& rep, const std::string& label) {
    for (const auto& e : rep.entries) {
      t.check(e.pass, [&] { return label + ": lambda " + fmt(e.lambda) + " lhs " + fmt(e.lhs) + " > rhs " + fmt(e.rhs); });
      if (e.rhs > 0) worst = std::max(worst, e.lhs / e.rhs);
      ++entries;
    }
    t.check(rep.trivial_pass, [&] {
      return label + ": trivial bound " + fmt(rep.trivial_lhs) + " > " + fmt(rep.trivial_rhs);
    });
  };

  {
    const Fixture fx = log64_fixture(opt);
    const double h = fx.space.distance(0, 1);
    const Ball b0 = ball_at(fx.space, 15, 16.5 * h);  // left half
    const CZParams prm = make_cz_params(fx.space, b0, 1.0, 2.0);
    const LocalJNReport rep = local_jn_verify(fx.space, fx.f, prm, prm.s0, 0.5, std::nullopt, {PackingMode::Exact});
    t.check(rep.entries.size() == 50, [] { return std::string("log fixture grid is not 50 values"); });
    record(rep, "log fixture");
    ++t.r.instances;
  }

  std::size_t nonvacuous = 0;
  const std::size_t kRandom = 100;
  for (std::size_t inst = 0; inst < kRandom; ++inst) {
    const CZConfig c = inst % 3 != 2 ? random_dyadic_config(rng, cache) : random_grid_config(rng, cache);
    const double p = std::array{1.5, 2.0, 3.0}[pick(rng, 0, 2)];
    const CZParams prm = c.params(p);
    const double s = coin(rng) ? prm.s0 : prm.s0 * uniform(rng, 0.01, 1.0);
    const double r = uniform(rng, s, 0.5);
    const LocalJNReport rep = local_jn_verify(c.space(), c.f, prm, s, r);
    record(rep, c.label);
    if (std::any_of(rep.entries.begin(), rep.entries.end(), [](const auto& e) { return e.lhs > 0.0; })) ++nonvacuous;
    ++t.r.instances;
  }
  return t.finish(kRandom + 1, std::to_string(t.r.instances) + " fixtures, " + std::to_string(entries) +
                                   " lambda values (" + std::to_string(nonvacuous) +
                                   " fixtures with nonzero lhs), max lhs/rhs " + fmt(worst) +
                                   "; trivial bound asserted on each");
}

// ---------------------------------------------------------------- 11

CriterionResult global_suite(const Options&, std::uint64_t seed) {
  Rng rng(seed);
  SpaceCache cache;
  Tally t;

  // hand-built single-condition violations
  const Space grid = grid_space(1, 32, 1.0 / 32.0);
  const BomanDecomposition good = grid_boman_decomposition(grid, grid.all_points(), 1);
  t.check(verify_boman(grid, good).pass, [] { return std::string("grid decomposition does not verify"); });
  std::vector<std::pair<std::string, BomanDecomposition>> broken;
  {
    BomanDecomposition d = good;
    d.region.pop_back();
    broken.emplace_back("cover", d);
  }
  {
    BomanDecomposition d = good;
    d.M = verify_boman(grid, good).max_overlap - 1;
    broken.emplace_back("overlap", d);
  }
  {
    BomanDecomposition d = good;
    const std::size_t b = d.central == 0 ? 1 : 0;
    d.chains[b].pop_back();
    if (d.chains[b].empty()) d.chains[b].push_back(d.central);
    broken.emplace_back("chains", d);
  }
  {
    BomanDecomposition d = good;
    auto& D = d.links.begin()->second;
    D.resize(1);
    broken.emplace_back("links", d);
  }
  {
    BomanDecomposition d = good;
    d.rho = 1.0 + 1e-6;
    broken.emplace_back("rho", d);
  }
  std::size_t detected = 0;
  for (const auto& [name, dec] : broken) {
    const BomanCertificate cert = verify_boman(grid, dec);
    bool only = !cert.pass;
    for (const auto& cond : cert.conditions) only = only && (cond.pass == (cond.name != name));
    t.check(only, [&] { return "violation of '" + name + "' not isolated"; });
    if (only) ++detected;
  }

  // single-ball global verification equals the local one
  std::size_t single = 0;
  for (std::size_t inst = 0; inst < 20; ++inst) {
    const CZConfig c = random_dyadic_config(rng, cache);
    BomanDecomposition d;
    d.balls = {ball_at(c.space(), c.base.center, c.space().full_radius())};
    d.region = c.space().all_points();
    d.C1 = 2.0;
    d.C2 = 3.0;
    d.C3 = 2.0;
    d.rho = 2.0;
    d.M = 1;
    d.chains = {{0}};
    const double eta = d.C2 / d.C1 - 1.0;
    const Ball b0 = dilate(c.space(), d.balls[0], d.C1);
    const CZParams prm = make_cz_params(c.space(), b0, eta, 2.0, 0.5, std::nullopt, c.prep->profile);
    const double s = prm.s0;
    const LambdaGrid lambdas = LambdaGrid::log_spaced(1e-3, 20.0, 30);
    const LocalJNReport local = local_jn_verify(c.space(), c.f, prm, s, 0.5, lambdas);
    const GlobalJNReport global = global_jn_verify(c.space(), c.f, d, 2.0, s, 0.5, lambdas);
    bool same = local.entries.size() == global.entries.size();
    for (std::size_t k = 0; same && k < local.entries.size(); ++k)
      same = close(local.entries[k].lhs, global.entries[k].lhs, 1e-12);
    t.check(same, [&] { return "single-ball global lhs differs from local on " + c.label; });
    ++single;
  }

  // lower bound of the equivalence
  std::size_t lower = 0;
  for (std::size_t inst = 0; inst < 120; ++inst) {
    const std::size_t n = pick(rng, 1, 6);
    const Space space = random_space(rng, n, coin(rng));
    const SampleFunction f{random_values(rng, n)};
    const double p = uniform(rng, 1.1, 5.0);
    const double q = uniform(rng, 0.2, p * 0.999);
    const double s = uniform(rng, 1e-3, 0.5);
    const EquivalenceReport rep = jn_equivalence_check(space, f, space.all_points(), p, q, s);
    t.check(rep.lower_pass, [&] { return "equivalence lower bound fails: " + fmt(rep.lower) + " > " + fmt(rep.integral_norm); });
    ++lower;
  }

  // empirical constants on the grid fixtures
  std::string constants;
  for (const auto& [space, label] : {std::pair{grid_space(1, 32, 1.0 / 32.0), std::string("1-D 32")},
                                     std::pair{grid_space(2, 8, 1.0 / 8.0), std::string("2-D 8x8")}}) {
    const BomanDecomposition d = grid_boman_decomposition(space, space.all_points(), 1);
    const SampleFunction f = canonical_function("log_blowup", space);
    const ChainRatio cr = chain_ratio(space, f, d, 2.0, 0.01);
    const GlobalJNReport g = global_jn_verify(space, f, d, 2.0, boman_s0(space, d), 0.5);
    t.check(std::isfinite(cr.c0) && std::isfinite(g.c_meas),
            [&] { return "non-finite empirical constant on " + label; });
    constants += "; " + label + ": C0 " + fmt(cr.c0) + ", C_meas " + fmt(g.c_meas) + " (budget " + fmt(g.budget) + ")";
  }

  t.r.instances = broken.size() + single + lower;
  return t.finish(5 + 20 + 100, std::to_string(detected) + "/5 violations isolated, " + std::to_string(single) +
                                    " single-ball matches, " + std::to_string(lower) + " lower-bound instances" +
                                    constants);
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "median properties", median_properties},
      {2, "oscillation oracle", oscillation_oracle},
      {3, "packing oracle", packing_oracle},
      {4, "centered sandwich", centered_sandwich},
      {5, "norm chain", norm_chain},
      {6, "BMO limit", bmo_limit},
      {7, "5-covering", covering_suite},
      {8, "CZ decompositions", cz_suite},
      {9, "good lambda", good_lambda_suite},
      {10, "local John-Nirenberg", local_jn_suite},
      {11, "global and Boman", global_suite},
  };
  return all;
}

std::vector<CriterionResult> run(const Options& options) {
  std::vector<const Criterion*> todo;
  for (const auto& c : criteria())
    if (!options.only || options.only->count(c.id)) todo.push_back(&c);

  std::vector<CriterionResult> results(todo.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      const Criterion& c = *todo[i];
      const std::uint64_t seed = options.seed * 1000003ULL + static_cast<std::uint64_t>(c.id);
      try {
        results[i] = c.run(options, seed);
      } catch (const std::exception& e) {
        results[i] = CriterionResult{};
        results[i].detail = std::string("aborted: ") + e.what();
      }
      results[i].id = c.id;
      results[i].name = c.name;
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(options.threads, todo.size()));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return results;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << "[" << (r.pass ? "PASS" : "FAIL") << "] " << r.id << ". " << r.name << ": " << r.detail;
  if (r.violations > 0) os << " (" << r.violations << " violations)";
  return os.str();
}

}  // namespace medjn::acceptance
