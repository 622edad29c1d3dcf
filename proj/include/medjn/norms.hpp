#pragma once

// L^p, weak L^p, median BMO and the two John-Nirenberg functionals.
//
//   ||f||_{JN_{p,0,s}(R)}^p = sup sum_i mu(B_i) (inf_c m^s_{|f-c|}(B_i))^p
//   ||f||_{JN_{p,q}(R)}^p   = sup sum_i mu(B_i) (inf_c avg_{B_i} |f-c|^q)^{p/q}
//
// with the supremum over pairwise-disjoint balls whose member sets lie in R.
// Only canonical balls enter the search: both the oscillation and the
// measure of a ball depend on its member set alone.

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "medjn/median.hpp"
#include "medjn/packing.hpp"
#include "medjn/space.hpp"

namespace medjn {

enum class PackingMode { Exact, Greedy, Auto };

[[nodiscard]] std::string_view to_string(PackingMode mode) noexcept;

struct PackingOptions {
  PackingMode mode = PackingMode::Exact;
  // Exact mode refuses problems the frontier search cannot finish within
  // `state_budget` unless forced.
  bool force = false;
  // At most this many nonzero candidates go to branch-and-bound; larger
  // problems use the memoized frontier search.
  std::size_t branch_and_bound_limit = 32;
  std::size_t state_budget = 4'000'000;
};

struct PackedBall {
  Ball ball;
  double oscillation = 0.0;
  double term = 0.0;  // mu(B) * oscillation^exponent
};

struct BallPacking {
  std::vector<PackedBall> balls;
  double total = 0.0;  // sum of terms
};

struct NormResult {
  double norm = 0.0;
  BallPacking packing;
  PackingMode mode = PackingMode::Exact;
  bool exact = false;  // false: greedy lower bound
  std::size_t candidates = 0;
};

[[nodiscard]] double lp_norm(const Space& space, const SampleFunction& f, const PointSet& region, double p);

// (max over levels v of |g| of v^p mu{|g| >= v})^{1/p}
[[nodiscard]] double weak_lp_norm(const Space& space, std::span<const double> g, const PointSet& region, double p);

[[nodiscard]] Oscillation integral_oscillation(const WeightedSample& sample, double q);
[[nodiscard]] Oscillation integral_oscillation(const Space& space, const SampleFunction& f, const PointSet& set,
                                               double q);

[[nodiscard]] double bmo_median_norm(const Space& space, const SampleFunction& f, const PointSet& region, double s);

// Generic packed functional: (sup sum mu(B) osc(B)^exponent)^{1/root}.
[[nodiscard]] NormResult packed_norm(const Space& space, const PointSet& region,
                                     const std::function<double(const Ball&)>& oscillation, double exponent,
                                     double root, const PackingOptions& options);

[[nodiscard]] NormResult jn_median_norm(const Space& space, const SampleFunction& f, const PointSet& region, double p,
                                        double s, const PackingOptions& options = {});

[[nodiscard]] NormResult jn_integral_norm(const Space& space, const SampleFunction& f, const PointSet& region,
                                          double p, double q, const PackingOptions& options = {});

// Packed supremum with the constants replaced by maximal t-medians:
// (sup sum mu(B) (m^s_{|f - m^t_f(B)|}(B))^p)^{1/p}.
[[nodiscard]] NormResult jn_median_centered(const Space& space, const SampleFunction& f, const PointSet& region,
                                            double p, double s, double t, const PackingOptions& options = {});

}  // namespace medjn
