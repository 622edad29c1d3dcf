#pragma once

// Maximal s-medians, s-median certification and median oscillation.
//
// For a set A of positive measure and 0 < s <= 1 the maximal s-median is
//   m^s_f(A) = inf { a : mu{x in A : f(x) > a} < s mu(A) },
// which on a finite set is attained at one of the sampled values.

#include <span>
#include <vector>

#include "medjn/space.hpp"

namespace medjn {

// A real value per point of a Space, indexed like the space.
struct SampleFunction {
  std::vector<double> values;

  [[nodiscard]] double operator[](PointIndex i) const { return values[i]; }
  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

// Throws NonFiniteValue if any value is +-inf or NaN, InvalidParams if the
// size does not match the space.
void validate_function(const Space& space, const SampleFunction& f);

// Values and weights gathered contiguously from a point set; the unit the
// median and oscillation routines operate on.
struct WeightedSample {
  std::vector<double> values;
  std::vector<double> weights;
  double total = 0.0;

  static WeightedSample gather(const Space& space, std::span<const double> f, const PointSet& set);
};

[[nodiscard]] double maximal_median(std::span<const double> values, std::span<const double> weights, double s);
[[nodiscard]] double maximal_median(const WeightedSample& sample, double s);
[[nodiscard]] double maximal_median(const Space& space, const SampleFunction& f, const PointSet& set, double s);

[[nodiscard]] bool is_s_median(double value, const WeightedSample& sample, double s);
[[nodiscard]] bool is_s_median(double value, const Space& space, const SampleFunction& f, const PointSet& set,
                               double s);

struct Oscillation {
  double value = 0.0;
  double center = 0.0;  // a minimizing constant c (smallest on ties)
};

// inf over c of m^s_{|f-c|}(B). The minimum is the smallest h such that a
// closed window [c-h, c+h] leaves mass < s mu(B) outside; it is found with a
// two-pointer sweep over the sorted values in O(n log n).
[[nodiscard]] Oscillation median_oscillation(const WeightedSample& sample, double s);
[[nodiscard]] Oscillation median_oscillation(const Space& space, const SampleFunction& f, const PointSet& set,
                                             double s);

// m^s_{|f-c|}(B) for a fixed constant c.
[[nodiscard]] double centered_median(const WeightedSample& sample, double c, double s);

}  // namespace medjn
