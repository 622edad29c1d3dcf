#pragma once

// Slow, independent reference computations. They share no code with the
// production algorithms beyond the data types and are used by the tests and
// the acceptance suite.

#include <span>
#include <vector>

#include "medjn/packing.hpp"

namespace medjn::oracle {

// inf{a : mu{v > a} < s total}, by scanning every sample value.
[[nodiscard]] double maximal_median(std::span<const double> values, std::span<const double> weights, double s);

// m^s_{|v - c|} from the definition.
[[nodiscard]] double centered_median(std::span<const double> values, std::span<const double> weights, double c,
                                     double s);

// min over c in {(v_i + v_j)/2} of m^s_{|v - c|}; the optimum is always one
// of these midpoints.
[[nodiscard]] double oscillation_candidates(std::span<const double> values, std::span<const double> weights,
                                            double s);

// Grid scan of c -> m^s_{|v - c|} over [min v, max v] with `points` nodes.
// The function is 1-Lipschitz, so cells whose Lipschitz lower bound could
// beat the best value by more than `tol` are subdivided tenfold until none
// is left: the result lies in [min, min + tol].
[[nodiscard]] double oscillation_grid_scan(std::span<const double> values, std::span<const double> weights, double s,
                                           std::size_t points, double tol);

// Grid scan of c -> avg |v - c|^q with repeated tenfold zoom around the best
// node (valid for q >= 1, where the objective is convex).
[[nodiscard]] double integral_grid_scan(std::span<const double> values, std::span<const double> weights, double q,
                                        std::size_t points);

// Best total over every family of pairwise-disjoint items.
[[nodiscard]] double exhaustive_packing(std::span<const PackingItem> items);

}  // namespace medjn::oracle
